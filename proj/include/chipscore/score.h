// Core score types for the four-voice NES ensemble.
//
// Timing is in ticks of 1/44100 s throughout. Melodic voices carry MIDI
// pitches; the noise voice carries a noise type in [1, 16].

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <string>
#include <string_view>
#include <vector>

namespace chipscore {

using Tick = std::int64_t;

inline constexpr Tick kTicksPerSecond = 44100;

enum class VoiceKind : std::uint8_t { kP1 = 0, kP2 = 1, kTR = 2, kNO = 3 };

inline constexpr std::size_t kNumVoices = 4;
inline constexpr std::array<VoiceKind, 4> kAllVoices = {VoiceKind::kP1, VoiceKind::kP2,
                                                        VoiceKind::kTR, VoiceKind::kNO};
inline constexpr std::array<VoiceKind, 3> kMelodicVoices = {VoiceKind::kP1, VoiceKind::kP2,
                                                            VoiceKind::kTR};

constexpr std::size_t index_of(VoiceKind kind) { return static_cast<std::size_t>(kind); }

struct PitchRange {
  int low;
  int high;

  constexpr bool contains(int pitch) const { return pitch >= low && pitch <= high; }
  constexpr int size() const { return high - low + 1; }
};

constexpr PitchRange pitch_range(VoiceKind kind) {
  switch (kind) {
    case VoiceKind::kP1:
    case VoiceKind::kP2:
      return {33, 108};
    case VoiceKind::kTR:
      return {21, 108};
    case VoiceKind::kNO:
      return {1, 16};
  }
  return {0, -1};
}

/// "P1", "P2", "TR" or "NO".
std::string_view voice_name(VoiceKind kind);

/// Matches a track name against the voice prefixes p1/p2/tr/no, ignoring case.
std::optional<VoiceKind> voice_from_track_name(std::string_view name);

struct Note {
  int pitch = 0;
  Tick on = 0;
  Tick off = 0;

  Tick duration() const { return off - on; }

  friend bool operator==(const Note&, const Note&) = default;
  // Time order: onset, then offset, then pitch.
  friend auto operator<=>(const Note& a, const Note& b) {
    return std::tie(a.on, a.off, a.pitch) <=> std::tie(b.on, b.off, b.pitch);
  }
};

/// Throws ScoreError unless notes are sorted by onset, have off > on >= 0,
/// stay within the voice's range and never overlap.
void check_voice(VoiceKind kind, std::span<const Note> notes);

/// Four monophonic voices. Every constructed Score satisfies the voice
/// invariants; construction from parts sorts each voice by onset and then
/// validates, throwing ScoreError on any violation.
class Score {
 public:
  using Parts = std::array<std::vector<Note>, kNumVoices>;

  Score() = default;
  explicit Score(Parts parts);

  const std::vector<Note>& notes(VoiceKind kind) const { return parts_[index_of(kind)]; }
  const Parts& parts() const { return parts_; }

  bool empty() const;
  std::size_t note_count() const;
  std::size_t non_empty_voice_count() const;
  /// Latest note-off over all voices; 0 for an empty score.
  Tick end_tick() const;

  friend bool operator==(const Score&, const Score&) = default;

 private:
  Parts parts_;
};

/// One track of an arbitrary-ensemble MIDI file, timed in 44100 Hz ticks.
struct Track {
  std::string name;
  int program = 0;
  bool is_percussion = false;
  std::vector<Note> notes;

  friend bool operator==(const Track&, const Track&) = default;
};

struct MultiTrackScore {
  std::vector<Track> tracks;
  /// Notes discarded by the parser because they had zero or negative length.
  std::size_t dropped_notes = 0;
  /// Same-pitch re-triggers closed at the later onset.
  std::size_t repaired_overlaps = 0;

  std::size_t note_count() const;
};

}  // namespace chipscore

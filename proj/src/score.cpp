#include "chipscore/score.h"

#include <algorithm>
#include <cctype>
#include <string>

#include "chipscore/error.h"

namespace chipscore {

std::string_view voice_name(VoiceKind kind) {
  switch (kind) {
    case VoiceKind::kP1:
      return "P1";
    case VoiceKind::kP2:
      return "P2";
    case VoiceKind::kTR:
      return "TR";
    case VoiceKind::kNO:
      return "NO";
  }
  return "??";
}

std::optional<VoiceKind> voice_from_track_name(std::string_view name) {
  if (name.size() < 2) return std::nullopt;
  std::string prefix;
  for (char c : name.substr(0, 2)) {
    prefix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (prefix == "p1") return VoiceKind::kP1;
  if (prefix == "p2") return VoiceKind::kP2;
  if (prefix == "tr") return VoiceKind::kTR;
  if (prefix == "no") return VoiceKind::kNO;
  return std::nullopt;
}

void check_voice(VoiceKind kind, std::span<const Note> notes) {
  const PitchRange range = pitch_range(kind);
  const std::string voice(voice_name(kind));
  for (std::size_t i = 0; i < notes.size(); ++i) {
    const Note& note = notes[i];
    if (note.on < 0) {
      throw ScoreError(voice + ": negative onset at tick " + std::to_string(note.on));
    }
    if (note.off <= note.on) {
      throw ScoreError(voice + ": note " + std::to_string(note.pitch) + " at tick " +
                       std::to_string(note.on) + " has non-positive length");
    }
    if (!range.contains(note.pitch)) {
      throw ScoreError(voice + ": pitch " + std::to_string(note.pitch) + " at tick " +
                       std::to_string(note.on) + " outside [" + std::to_string(range.low) + ", " +
                       std::to_string(range.high) + "]");
    }
    if (i > 0) {
      const Note& prev = notes[i - 1];
      if (prev.on > note.on) {
        throw ScoreError(voice + ": notes not ordered by onset at tick " + std::to_string(note.on));
      }
      if (prev.off > note.on) {
        throw ScoreError(voice + ": overlapping notes at tick " + std::to_string(note.on) +
                         " (previous note ends at " + std::to_string(prev.off) + ")");
      }
    }
  }
}

Score::Score(Parts parts) : parts_(std::move(parts)) {
  for (VoiceKind kind : kAllVoices) {
    auto& notes = parts_[index_of(kind)];
    std::sort(notes.begin(), notes.end());
    check_voice(kind, notes);
  }
}

bool Score::empty() const { return note_count() == 0; }

std::size_t Score::note_count() const {
  std::size_t count = 0;
  for (const auto& notes : parts_) count += notes.size();
  return count;
}

std::size_t Score::non_empty_voice_count() const {
  return static_cast<std::size_t>(
      std::count_if(parts_.begin(), parts_.end(), [](const auto& notes) { return !notes.empty(); }));
}

Tick Score::end_tick() const {
  Tick end = 0;
  for (const auto& notes : parts_) {
    if (!notes.empty()) end = std::max(end, notes.back().off);
  }
  return end;
}

std::size_t MultiTrackScore::note_count() const {
  std::size_t count = 0;
  for (const Track& track : tracks) count += track.notes.size();
  return count;
}

}  // namespace chipscore

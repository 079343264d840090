// The 631-event vocabulary and the Score <-> event sequence codec.
//
// ID layout:
//   0          start/end of sequence
//   1..100     time shift of 1..100 ticks
//   101..190   time shift of 110..1000 ticks, step 10
//   191..370   time shift of 1100..19000 ticks, step 100
//   371        P1 note off, 372..447 P1 note on 33..108
//   448        P2 note off, 449..524 P2 note on 33..108
//   525        TR note off, 526..613 TR note on 21..108
//   614        NO note off, 615..630 NO note on types 1..16

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chipscore/score.h"

namespace chipscore {

using EventId = std::uint16_t;
using EventSeq = std::vector<EventId>;

inline constexpr std::size_t kVocabSize = 631;
inline constexpr EventId kBoundary = 0;
inline constexpr EventId kFirstTimeShift = 1;
inline constexpr EventId kLastTimeShift = 370;
inline constexpr EventId kFirstNoteEvent = 371;
inline constexpr EventId kFirstNoiseEvent = 614;
inline constexpr EventId kLastEvent = 630;
inline constexpr Tick kMaxTimeShift = 19000;

constexpr bool is_valid_event(std::uint32_t id) { return id <= kLastEvent; }
constexpr bool is_time_shift(EventId id) { return id >= kFirstTimeShift && id <= kLastTimeShift; }
/// Note events of P1, P2 and TR (371..613).
constexpr bool is_melodic_event(EventId id) { return id >= kFirstNoteEvent && id < kFirstNoiseEvent; }
constexpr bool is_noise_event(EventId id) { return id >= kFirstNoiseEvent && id <= kLastEvent; }

enum class EventKind : std::uint8_t { kBoundary, kTimeShift, kNoteOff, kNoteOn };

struct EventDesc {
  EventKind kind = EventKind::kBoundary;
  Tick ticks = 0;                     // time shifts only
  VoiceKind voice = VoiceKind::kP1;   // note events only
  int pitch = 0;                      // note-on only; noise type for NO

  friend bool operator==(const EventDesc&, const EventDesc&) = default;
};

class Vocab {
 public:
  Vocab();

  std::size_t size() const { return descs_.size(); }
  const EventDesc& describe(EventId id) const;

  /// The 370 representable time-shift lengths, ascending.
  std::span<const Tick> time_shift_values() const { return shift_values_; }

  /// Exact lookups; throw PreconditionError when not representable.
  EventId time_shift(Tick ticks) const;
  EventId note_off(VoiceKind voice) const;
  EventId note_on(VoiceKind voice, int pitch) const;

 private:
  std::vector<EventDesc> descs_;
  std::vector<Tick> shift_values_;
};

Vocab build_vocab();

/// Process-wide read-only instance.
const Vocab& vocab();

/// Human-readable token, e.g. "DT_110", "TR_ON_45", "NO_OFF", "BOUNDARY".
std::string event_name(EventId id);

/// Time-shift events covering a gap of `gap` ticks. Gaps up to 19000 map to
/// the nearest representable value (ties round up); longer gaps emit 19000
/// tick shifts until the remainder fits. Throws PreconditionError if gap < 1.
std::vector<EventId> quantize_gap(Tick gap);

/// Boundary, then per active tick the note events in P1, P2, TR, NO order
/// (off before on within a voice) followed by the time shift to the next
/// active tick, then boundary. Silence before the first note is encoded as
/// a leading time shift from tick 0.
EventSeq encode(const Score& score);

struct DecodeDiagnostics {
  std::size_t orphan_note_offs = 0;
  std::size_t legato_rearticulations = 0;
  /// Notes that would have ended at their own onset; not emitted.
  std::size_t zero_length_notes = 0;
  bool stopped_at_interior_boundary = false;

  friend bool operator==(const DecodeDiagnostics&, const DecodeDiagnostics&) = default;
};

struct Decoded {
  Score score;
  DecodeDiagnostics diagnostics;
};

/// Rebuilds a Score. A note-on over an active note closes it at the current
/// tick; orphan note-offs are ignored; notes still sounding at the end are
/// closed at the final tick. A leading boundary is skipped and any later
/// boundary ends decoding. Throws DecodeError for IDs above 630.
Decoded decode(std::span<const EventId> events);

struct ValidationReport {
  std::size_t orphan_note_offs = 0;
  std::size_t legato_rearticulations = 0;
  std::size_t interior_boundaries = 0;
  /// Note events out of P1 -> P2 -> TR -> NO (off before on) order within
  /// a same-tick run.
  std::size_t ordering_violations = 0;
  std::size_t out_of_range_ids = 0;
  std::size_t zero_length_notes = 0;

  bool clean() const {
    return orphan_note_offs == 0 && legato_rearticulations == 0 && interior_boundaries == 0 &&
           ordering_violations == 0 && out_of_range_ids == 0 && zero_length_notes == 0;
  }

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Counts convention violations in any ID sequence. Never throws.
ValidationReport validate(std::span<const EventId> events);

}  // namespace chipscore

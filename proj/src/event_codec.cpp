#include "chipscore/event_codec.h"

#include <algorithm>
#include <array>
#include <optional>
#include <tuple>

#include "chipscore/error.h"

namespace chipscore {
namespace {

// First ID of each voice's block; the block is [off, on(low)..on(high)].
constexpr std::array<EventId, kNumVoices> kVoiceBase = {371, 448, 525, 614};

std::optional<VoiceKind> voice_of(EventId id) {
  if (id < kFirstNoteEvent || id > kLastEvent) return std::nullopt;
  for (std::size_t v = kNumVoices; v-- > 0;) {
    if (id >= kVoiceBase[v]) return kAllVoices[v];
  }
  return std::nullopt;
}

}  // namespace

Vocab::Vocab() {
  descs_.reserve(kVocabSize);
  descs_.push_back({EventKind::kBoundary});
  for (Tick t = 1; t <= 100; ++t) shift_values_.push_back(t);
  for (Tick t = 110; t <= 1000; t += 10) shift_values_.push_back(t);
  for (Tick t = 1100; t <= kMaxTimeShift; t += 100) shift_values_.push_back(t);
  for (Tick t : shift_values_) descs_.push_back({EventKind::kTimeShift, t});
  for (VoiceKind voice : kAllVoices) {
    descs_.push_back({EventKind::kNoteOff, 0, voice});
    const PitchRange range = pitch_range(voice);
    for (int pitch = range.low; pitch <= range.high; ++pitch) {
      descs_.push_back({EventKind::kNoteOn, 0, voice, pitch});
    }
  }
  if (descs_.size() != kVocabSize || shift_values_.size() != kLastTimeShift) {
    throw Error("vocabulary construction produced " + std::to_string(descs_.size()) + " events");
  }
}

const EventDesc& Vocab::describe(EventId id) const {
  if (!is_valid_event(id)) throw PreconditionError("event ID " + std::to_string(id) + " out of range");
  return descs_[id];
}

EventId Vocab::time_shift(Tick ticks) const {
  auto it = std::lower_bound(shift_values_.begin(), shift_values_.end(), ticks);
  if (it == shift_values_.end() || *it != ticks) {
    throw PreconditionError(std::to_string(ticks) + " ticks is not a representable time shift");
  }
  return static_cast<EventId>(kFirstTimeShift + (it - shift_values_.begin()));
}

EventId Vocab::note_off(VoiceKind voice) const { return kVoiceBase[index_of(voice)]; }

EventId Vocab::note_on(VoiceKind voice, int pitch) const {
  const PitchRange range = pitch_range(voice);
  if (!range.contains(pitch)) {
    throw PreconditionError(std::string(voice_name(voice)) + " cannot play pitch " + std::to_string(pitch));
  }
  return static_cast<EventId>(kVoiceBase[index_of(voice)] + 1 + (pitch - range.low));
}

Vocab build_vocab() { return Vocab(); }

const Vocab& vocab() {
  static const Vocab instance;
  return instance;
}

std::string event_name(EventId id) {
  if (!is_valid_event(id)) return "INVALID_" + std::to_string(id);
  const EventDesc& d = vocab().describe(id);
  switch (d.kind) {
    case EventKind::kBoundary:
      return "BOUNDARY";
    case EventKind::kTimeShift:
      return "DT_" + std::to_string(d.ticks);
    case EventKind::kNoteOff:
      return std::string(voice_name(d.voice)) + "_OFF";
    case EventKind::kNoteOn:
      return std::string(voice_name(d.voice)) + "_ON_" + std::to_string(d.pitch);
  }
  return "?";
}

std::vector<EventId> quantize_gap(Tick gap) {
  if (gap < 1) throw PreconditionError("time gap must be at least 1 tick, got " + std::to_string(gap));
  std::vector<EventId> out;
  while (gap > kMaxTimeShift) {
    out.push_back(kLastTimeShift);
    gap -= kMaxTimeShift;
  }
  const auto values = vocab().time_shift_values();
  auto upper = std::lower_bound(values.begin(), values.end(), gap);
  // gap <= 19000 here, so upper is valid; ties go to the larger value.
  auto pick = upper;
  if (*upper != gap && upper != values.begin()) {
    auto lower = std::prev(upper);
    if (gap - *lower < *upper - gap) pick = lower;
  }
  out.push_back(static_cast<EventId>(kFirstTimeShift + (pick - values.begin())));
  return out;
}

EventSeq encode(const Score& score) {
  struct Pending {
    Tick tick;
    std::size_t voice;
    int phase;  // 0 = off, 1 = on
    int pitch;
  };
  std::vector<Pending> pending;
  pending.reserve(score.note_count() * 2);
  for (VoiceKind kind : kAllVoices) {
    for (const Note& n : score.notes(kind)) {
      pending.push_back({n.on, index_of(kind), 1, n.pitch});
      pending.push_back({n.off, index_of(kind), 0, n.pitch});
    }
  }
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.tick, a.voice, a.phase) < std::tie(b.tick, b.voice, b.phase);
  });

  const Vocab& v = vocab();
  EventSeq out{kBoundary};
  Tick cursor = 0;
  for (const Pending& p : pending) {
    if (p.tick > cursor) {
      const auto shift = quantize_gap(p.tick - cursor);
      out.insert(out.end(), shift.begin(), shift.end());
      cursor = p.tick;
    }
    const VoiceKind voice = kAllVoices[p.voice];
    out.push_back(p.phase == 0 ? v.note_off(voice) : v.note_on(voice, p.pitch));
  }
  out.push_back(kBoundary);
  return out;
}

Decoded decode(std::span<const EventId> events) {
  struct Active {
    bool on = false;
    int pitch = 0;
    Tick start = 0;
  };
  const Vocab& v = vocab();
  std::array<Active, kNumVoices> active{};
  Score::Parts parts;
  DecodeDiagnostics diag;
  Tick now = 0;

  auto close = [&](std::size_t voice) {
    Active& a = active[voice];
    if (now > a.start) {
      parts[voice].push_back({a.pitch, a.start, now});
    } else {
      ++diag.zero_length_notes;
    }
    a.on = false;
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const EventId id = events[i];
    if (!is_valid_event(id)) throw DecodeError(i, "event ID " + std::to_string(id) + " out of range");
    const EventDesc& d = v.describe(id);
    if (d.kind == EventKind::kBoundary) {
      if (i == 0) continue;
      diag.stopped_at_interior_boundary = i + 1 < events.size();
      break;
    }
    if (d.kind == EventKind::kTimeShift) {
      now += d.ticks;
      continue;
    }
    const std::size_t voice = index_of(d.voice);
    if (d.kind == EventKind::kNoteOff) {
      if (active[voice].on) {
        close(voice);
      } else {
        ++diag.orphan_note_offs;
      }
      continue;
    }
    if (active[voice].on) {
      ++diag.legato_rearticulations;
      close(voice);
    }
    active[voice] = {true, d.pitch, now};
  }
  for (std::size_t voice = 0; voice < kNumVoices; ++voice) {
    if (active[voice].on) close(voice);
  }
  return {Score(std::move(parts)), diag};
}

ValidationReport validate(std::span<const EventId> events) {
  ValidationReport report;
  std::array<bool, kNumVoices> sounding{};
  std::array<bool, kNumVoices> started_this_tick{};
  int last_key = -1;  // voice * 2 + phase of the previous note event in this run

  auto new_run = [&] {
    last_key = -1;
    started_this_tick.fill(false);
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const EventId id = events[i];
    if (!is_valid_event(id)) {
      ++report.out_of_range_ids;
      continue;
    }
    if (id == kBoundary) {
      if (i != 0 && i + 1 != events.size()) ++report.interior_boundaries;
      new_run();
      continue;
    }
    if (is_time_shift(id)) {
      new_run();
      continue;
    }
    const auto voice = voice_of(id);
    const std::size_t vi = index_of(*voice);
    const bool is_off = id == kVoiceBase[vi];
    const int key = static_cast<int>(vi) * 2 + (is_off ? 0 : 1);
    if (key < last_key) ++report.ordering_violations;
    last_key = std::max(last_key, key);
    if (is_off) {
      if (!sounding[vi]) {
        ++report.orphan_note_offs;
      } else if (started_this_tick[vi]) {
        ++report.zero_length_notes;
      }
      sounding[vi] = false;
    } else {
      if (sounding[vi]) {
        ++report.legato_rearticulations;
        if (started_this_tick[vi]) ++report.zero_length_notes;
      }
      sounding[vi] = true;
      started_this_tick[vi] = true;
    }
  }
  return report;
}

}  // namespace chipscore

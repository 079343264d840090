// Corpus-level helpers behind the command-line tool.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chipscore/event_codec.h"

namespace chipscore {

inline constexpr std::size_t kDefaultExcerptLength = 512;

struct Excerpt {
  std::size_t source_line = 0;  // 0-based
  std::size_t offset = 0;
  EventSeq events;
  /// A trailing remainder shorter than the requested length.
  bool is_short = false;
};

/// Cuts every sequence into consecutive excerpts of `length` events; the
/// final remainder of each sequence is kept and flagged.
std::vector<Excerpt> make_excerpts(std::span<const EventSeq> corpus, std::size_t length);

struct CorpusStats {
  std::size_t sequences = 0;
  std::size_t events = 0;
  std::size_t time_shift_events = 0;
  std::size_t note_events = 0;
  std::size_t boundary_events = 0;
  Tick total_ticks = 0;
  std::size_t excerpts = 0;
  std::size_t full_excerpts = 0;
  /// Mean of (sum of time-shift ticks) / 44100 over full-length excerpts,
  /// or over all excerpts when none is full length.
  double mean_excerpt_seconds = 0.0;

  double total_seconds() const { return static_cast<double>(total_ticks) / kTicksPerSecond; }
};

CorpusStats corpus_stats(std::span<const EventSeq> corpus,
                         std::size_t excerpt_length = kDefaultExcerptLength);

/// Sum of time-shift ticks in a sequence.
Tick sequence_ticks(std::span<const EventId> events);

}  // namespace chipscore

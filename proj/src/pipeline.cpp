#include "chipscore/pipeline.h"

#include "chipscore/error.h"

namespace chipscore {

std::vector<Excerpt> make_excerpts(std::span<const EventSeq> corpus, std::size_t length) {
  if (length == 0) throw PreconditionError("excerpt length must be positive");
  std::vector<Excerpt> excerpts;
  for (std::size_t line = 0; line < corpus.size(); ++line) {
    const EventSeq& seq = corpus[line];
    for (std::size_t offset = 0; offset < seq.size(); offset += length) {
      const std::size_t end = std::min(seq.size(), offset + length);
      Excerpt excerpt;
      excerpt.source_line = line;
      excerpt.offset = offset;
      excerpt.events.assign(seq.begin() + static_cast<std::ptrdiff_t>(offset),
                            seq.begin() + static_cast<std::ptrdiff_t>(end));
      excerpt.is_short = end - offset < length;
      excerpts.push_back(std::move(excerpt));
    }
  }
  return excerpts;
}

Tick sequence_ticks(std::span<const EventId> events) {
  Tick total = 0;
  const Vocab& v = vocab();
  for (EventId id : events) {
    if (is_time_shift(id)) total += v.describe(id).ticks;
  }
  return total;
}

CorpusStats corpus_stats(std::span<const EventSeq> corpus, std::size_t excerpt_length) {
  CorpusStats stats;
  stats.sequences = corpus.size();
  for (const EventSeq& seq : corpus) {
    stats.events += seq.size();
    for (EventId id : seq) {
      if (id == kBoundary) {
        ++stats.boundary_events;
      } else if (is_time_shift(id)) {
        ++stats.time_shift_events;
      } else if (is_valid_event(id)) {
        ++stats.note_events;
      }
    }
    stats.total_ticks += sequence_ticks(seq);
  }

  const auto excerpts = make_excerpts(corpus, excerpt_length);
  stats.excerpts = excerpts.size();
  double full_seconds = 0.0;
  double all_seconds = 0.0;
  for (const Excerpt& e : excerpts) {
    const double seconds = static_cast<double>(sequence_ticks(e.events)) / kTicksPerSecond;
    all_seconds += seconds;
    if (!e.is_short) {
      ++stats.full_excerpts;
      full_seconds += seconds;
    }
  }
  if (stats.full_excerpts > 0) {
    stats.mean_excerpt_seconds = full_seconds / static_cast<double>(stats.full_excerpts);
  } else if (stats.excerpts > 0) {
    stats.mean_excerpt_seconds = all_seconds / static_cast<double>(stats.excerpts);
  }
  return stats;
}

}  // namespace chipscore

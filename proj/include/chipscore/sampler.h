// Autoregressive generation with temperature and top-k shaping.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "chipscore/event_codec.h"
#include "chipscore/language_model.h"
#include "chipscore/rng.h"

namespace chipscore {

struct SamplingParams {
  double temperature = 0.95;
  int top_k = 32;
  std::size_t max_events = 2048;
  std::uint64_t seed = 0;

  /// Throws PreconditionError.
  void validate() const;
};

/// Weights p^(1/T), restricted to the top_k most probable events (ties go
/// to the lower ID), renormalized to sum to 1.
TokenDist shape_dist(const TokenDist& dist, double temperature, int top_k);

EventId sample_next(const TokenDist& dist, const SamplingParams& params, Rng& rng);

/// Samples until the boundary token is emitted or max_events new events
/// have been drawn. Returns prime followed by the continuation; an empty
/// prime stands for the single boundary token [0].
EventSeq generate(const LanguageModel& model, std::span<const EventId> prime,
                  const SamplingParams& params, Rng& rng);

/// Drops a trailing boundary token so that a complete encoded sequence can
/// be used as a prime.
EventSeq prime_from_sequence(std::span<const EventId> sequence);

struct RhythmOptions {
  /// Maximum melodic events sampled before each forced event.
  std::size_t slot_cap = 8;
  /// A slot ends once the model puts less than this much mass on melodic
  /// (P1/P2/TR) events.
  double min_melodic_mass = 0.5;
};

/// Forces every template event (time shifts and noise events) in order and
/// lets the model fill the gaps with melodic note events only. The
/// returned sequence carries no boundary tokens; its time-shift and noise
/// events equal the template exactly. Throws PreconditionError for an
/// empty template or one holding other IDs.
EventSeq generate_rhythm_conditioned(const LanguageModel& model,
                                     std::span<const EventId> rhythm_template,
                                     const SamplingParams& params, Rng& rng,
                                     const RhythmOptions& options = {});

/// The time-shift and noise events of a sequence, in order.
EventSeq extract_rhythm(std::span<const EventId> events);

}  // namespace chipscore

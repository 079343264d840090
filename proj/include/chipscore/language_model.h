#pragma once

#include <array>
#include <span>

#include "chipscore/event_codec.h"

namespace chipscore {

/// A probability for every event ID.
using TokenDist = std::array<double, kVocabSize>;

/// Anything that yields a next-event distribution given the history so far.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual TokenDist next_dist(std::span<const EventId> history) const = 0;

  virtual double prob(std::span<const EventId> history, EventId event) const {
    return next_dist(history)[event];
  }
};

/// Assigns 1/631 to every event regardless of history.
class UniformModel final : public LanguageModel {
 public:
  TokenDist next_dist(std::span<const EventId> history) const override;
  double prob(std::span<const EventId> history, EventId event) const override;
};

}  // namespace chipscore

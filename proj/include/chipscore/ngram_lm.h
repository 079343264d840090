// Interpolated n-gram language model over event IDs.
//
//   P(e | h) = (1 - eps) * sum_{o in S} lambda'_o * c_o(ctx_o, e) / c_o(ctx_o) + eps / V
//
// where ctx_o is the last o-1 tokens of h (left-padded with the boundary
// token), S is the set of orders whose context occurred in training, and
// lambda' renormalizes the configured weights over S.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "chipscore/event_codec.h"
#include "chipscore/language_model.h"

namespace chipscore {

struct NgramOptions {
  /// One weight per order, normalized at training time. Empty selects
  /// weights proportional to 1, 2, 4, ...
  std::vector<double> lambdas;
  double epsilon = 0.01;
};

class NgramModel final : public LanguageModel {
 public:
  using Context = std::vector<EventId>;

  struct ContextHash {
    std::size_t operator()(const Context& context) const noexcept;
  };

  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<EventId, std::uint64_t> next;

    friend bool operator==(const ContextCounts&, const ContextCounts&) = default;
  };

  using Table = std::unordered_map<Context, ContextCounts, ContextHash>;

  /// Counts every k-gram (k = 1..order) of every sequence, contexts
  /// left-padded with the boundary token. Throws PreconditionError for an
  /// empty corpus, invalid IDs, or bad options.
  static NgramModel train(std::span<const EventSeq> corpus, int order, const NgramOptions& options = {});

  static std::vector<double> default_lambdas(int order);

  int order() const { return order_; }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  std::uint64_t total_tokens() const { return total_tokens_; }

  /// Table of contexts of length order - 1.
  const Table& table(int order) const { return tables_.at(static_cast<std::size_t>(order - 1)); }

  /// Raw count of `event` following exactly `context` (length = k - 1).
  std::uint64_t count(std::span<const EventId> context, EventId event) const;

  TokenDist next_dist(std::span<const EventId> history) const override;
  double prob(std::span<const EventId> history, EventId event) const override;

  /// Versioned little-endian binary; see docs/formats.md.
  std::vector<std::uint8_t> serialize() const;
  /// Throws ModelFormatError (bad magic, version mismatch, truncation,
  /// corrupt contents). Never returns a partial model.
  static NgramModel deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const NgramModel& a, const NgramModel& b);

 private:
  struct Component {
    double weight_per_count;
    const ContextCounts* counts;
  };

  NgramModel() = default;

  std::vector<Component> mixture(std::span<const EventId> history) const;

  int order_ = 1;
  double epsilon_ = 0.01;
  std::vector<double> lambdas_;
  std::uint64_t total_tokens_ = 0;
  std::vector<Table> tables_;
};

}  // namespace chipscore

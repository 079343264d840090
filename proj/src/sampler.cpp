#include "chipscore/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chipscore/error.h"

namespace chipscore {
namespace {

EventId draw(const TokenDist& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = rng.uniform01() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t e = 0; e < weights.size(); ++e) {
    if (weights[e] <= 0.0) continue;
    cumulative += weights[e];
    last_positive = e;
    if (cumulative > target) return static_cast<EventId>(e);
  }
  return static_cast<EventId>(last_positive);
}

}  // namespace

void SamplingParams::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw PreconditionError("temperature must be a positive finite number");
  }
  if (top_k < 1 || top_k > static_cast<int>(kVocabSize)) {
    throw PreconditionError("top_k must lie in [1, 631], got " + std::to_string(top_k));
  }
  if (max_events < 1) throw PreconditionError("max_events must be positive");
}

TokenDist shape_dist(const TokenDist& dist, double temperature, int top_k) {
  std::array<EventId, kVocabSize> order;
  std::iota(order.begin(), order.end(), EventId{0});
  const auto k = static_cast<std::size_t>(std::clamp(top_k, 1, static_cast<int>(kVocabSize)));
  // p^(1/T) is monotone in p, so ranking on p gives the same top-k.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](EventId a, EventId b) { return dist[a] > dist[b] || (dist[a] == dist[b] && a < b); });
  const double peak = dist[order[0]];
  TokenDist shaped{};
  if (!(peak > 0.0)) return shaped;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const EventId e = order[i];
    const double w = dist[e] > 0.0 ? std::pow(dist[e] / peak, 1.0 / temperature) : 0.0;
    shaped[e] = w;
    total += w;
  }
  for (double& w : shaped) w /= total;
  return shaped;
}

EventId sample_next(const TokenDist& dist, const SamplingParams& params, Rng& rng) {
  if (params.top_k == 1) {
    return static_cast<EventId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  }
  return draw(shape_dist(dist, params.temperature, params.top_k), rng);
}

EventSeq generate(const LanguageModel& model, std::span<const EventId> prime,
                  const SamplingParams& params, Rng& rng) {
  params.validate();
  EventSeq history(prime.begin(), prime.end());
  if (history.empty()) history.push_back(kBoundary);
  for (std::size_t n = 0; n < params.max_events; ++n) {
    const EventId next = sample_next(model.next_dist(history), params, rng);
    history.push_back(next);
    if (next == kBoundary) break;
  }
  return history;
}

EventSeq prime_from_sequence(std::span<const EventId> sequence) {
  EventSeq prime(sequence.begin(), sequence.end());
  if (prime.size() > 1 && prime.back() == kBoundary) prime.pop_back();
  return prime;
}

EventSeq generate_rhythm_conditioned(const LanguageModel& model,
                                     std::span<const EventId> rhythm_template,
                                     const SamplingParams& params, Rng& rng,
                                     const RhythmOptions& options) {
  params.validate();
  if (rhythm_template.empty()) throw PreconditionError("rhythm template is empty");
  for (std::size_t i = 0; i < rhythm_template.size(); ++i) {
    const EventId id = rhythm_template[i];
    if (!is_valid_event(id) || !(is_time_shift(id) || is_noise_event(id))) {
      throw PreconditionError("rhythm template position " + std::to_string(i) + " holds event " +
                              std::to_string(id) + ", which is neither a time shift nor a noise event");
    }
  }

  EventSeq history{kBoundary};
  for (EventId forced : rhythm_template) {
    for (std::size_t slot = 0; slot < options.slot_cap; ++slot) {
      TokenDist dist = model.next_dist(history);
      double melodic_mass = 0.0;
      for (std::size_t e = 0; e < kVocabSize; ++e) {
        if (is_melodic_event(static_cast<EventId>(e))) {
          melodic_mass += dist[e];
        } else {
          dist[e] = 0.0;
        }
      }
      if (!(melodic_mass > 0.0) || melodic_mass < options.min_melodic_mass) break;
      for (double& p : dist) p /= melodic_mass;
      history.push_back(sample_next(dist, params, rng));
    }
    history.push_back(forced);
  }
  return EventSeq(history.begin() + 1, history.end());
}

EventSeq extract_rhythm(std::span<const EventId> events) {
  EventSeq rhythm;
  for (EventId id : events) {
    if (is_time_shift(id) || is_noise_event(id)) rhythm.push_back(id);
  }
  return rhythm;
}

}  // namespace chipscore

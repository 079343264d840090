// Score-level data augmentation.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "chipscore/rng.h"
#include "chipscore/score.h"

namespace chipscore {

struct AugmentConfig {
  int transpose_min = -6;
  int transpose_max = 5;
  double speed_pct = 0.05;
  double p_remove = 0.5;
  double p_shuffle = 0.5;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct Transformed {
  Score score;
  std::size_t dropped_notes = 0;
};

/// Shifts P1/P2/TR by `semitones`; notes leaving their voice's range are
/// dropped. NO is untouched.
Transformed transpose(const Score& score, int semitones);

/// Scales every boundary by `factor` (> 0) and rounds to the nearest tick.
/// Notes that collapse to zero length are dropped.
Transformed stretch(const Score& score, double factor);

/// With m non-empty voices (m >= 2), empties k ~ U[1, m-1] of them chosen
/// uniformly. Scores with at most one non-empty voice are returned as is.
Score remove_instruments(const Score& score, Rng& rng);

/// source[d] is the voice whose part destination voice d now plays.
using MelodicPermutation = std::array<VoiceKind, 3>;

Transformed permute_melodic(const Score& score, const MelodicPermutation& source);

/// Uniform permutation of the P1/P2/TR parts (identity included).
Transformed shuffle_melodic(const Score& score, Rng& rng);

struct AugmentRecord {
  int semitones = 0;
  double factor = 1.0;
  bool removed = false;
  bool shuffled = false;
  std::size_t dropped_notes = 0;
};

struct Augmented {
  Score score;
  AugmentRecord record;
};

/// transpose, stretch, then remove_instruments and shuffle_melodic each with
/// their configured probability, in that order.
Augmented augment(const Score& score, const AugmentConfig& cfg, Rng& rng);

}  // namespace chipscore

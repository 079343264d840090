#include "chipscore/augment.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "chipscore/error.h"

namespace chipscore {
namespace {

constexpr std::array<MelodicPermutation, 6> kPermutations = {{
    {VoiceKind::kP1, VoiceKind::kP2, VoiceKind::kTR},
    {VoiceKind::kP1, VoiceKind::kTR, VoiceKind::kP2},
    {VoiceKind::kP2, VoiceKind::kP1, VoiceKind::kTR},
    {VoiceKind::kP2, VoiceKind::kTR, VoiceKind::kP1},
    {VoiceKind::kTR, VoiceKind::kP1, VoiceKind::kP2},
    {VoiceKind::kTR, VoiceKind::kP2, VoiceKind::kP1},
}};

// Keeps notes that fit `voice`; returns how many were dropped.
std::size_t keep_in_range(VoiceKind voice, std::vector<Note>& notes) {
  const PitchRange range = pitch_range(voice);
  const auto before = notes.size();
  std::erase_if(notes, [&](const Note& n) { return !range.contains(n.pitch); });
  return before - notes.size();
}

}  // namespace

void AugmentConfig::validate() const {
  if (transpose_min > transpose_max) throw PreconditionError("empty transposition range");
  if (!(speed_pct > 0.0 && speed_pct < 1.0)) throw PreconditionError("speed_pct must lie in (0, 1)");
  for (double p : {p_remove, p_shuffle}) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probabilities must lie in [0, 1]");
  }
}

Transformed transpose(const Score& score, int semitones) {
  Score::Parts parts = score.parts();
  std::size_t dropped = 0;
  for (VoiceKind voice : kMelodicVoices) {
    auto& notes = parts[index_of(voice)];
    for (Note& n : notes) n.pitch += semitones;
    dropped += keep_in_range(voice, notes);
  }
  return {Score(std::move(parts)), dropped};
}

Transformed stretch(const Score& score, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw PreconditionError("stretch factor must be positive, got " + std::to_string(factor));
  }
  Score::Parts parts;
  std::size_t dropped = 0;
  for (VoiceKind voice : kAllVoices) {
    auto& out = parts[index_of(voice)];
    for (const Note& n : score.notes(voice)) {
      const Tick on = std::llround(static_cast<double>(n.on) * factor);
      const Tick off = std::llround(static_cast<double>(n.off) * factor);
      if (!out.empty() && out.back().off > on) out.back().off = on;
      if (!out.empty() && out.back().off <= out.back().on) {
        out.pop_back();
        ++dropped;
      }
      if (off <= on) {
        ++dropped;
        continue;
      }
      out.push_back({n.pitch, on, off});
    }
  }
  return {Score(std::move(parts)), dropped};
}

Score remove_instruments(const Score& score, Rng& rng) {
  std::vector<std::size_t> present;
  for (std::size_t v = 0; v < kNumVoices; ++v) {
    if (!score.parts()[v].empty()) present.push_back(v);
  }
  const auto m = static_cast<std::int64_t>(present.size());
  if (m <= 1) return score;
  const auto k = static_cast<std::size_t>(rng.uniform_int(1, m - 1));
  // Partial Fisher-Yates: the first k entries become a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), m - 1));
    std::swap(present[i], present[j]);
  }
  Score::Parts parts = score.parts();
  for (std::size_t i = 0; i < k; ++i) parts[present[i]].clear();
  return Score(std::move(parts));
}

Transformed permute_melodic(const Score& score, const MelodicPermutation& source) {
  Score::Parts parts = score.parts();
  std::size_t dropped = 0;
  for (std::size_t d = 0; d < kMelodicVoices.size(); ++d) {
    auto notes = score.notes(source[d]);
    dropped += keep_in_range(kMelodicVoices[d], notes);
    parts[index_of(kMelodicVoices[d])] = std::move(notes);
  }
  return {Score(std::move(parts)), dropped};
}

Transformed shuffle_melodic(const Score& score, Rng& rng) {
  const auto pick = static_cast<std::size_t>(rng.uniform_int(0, kPermutations.size() - 1));
  return permute_melodic(score, kPermutations[pick]);
}

Augmented augment(const Score& score, const AugmentConfig& cfg, Rng& rng) {
  cfg.validate();
  AugmentRecord record;
  record.semitones = static_cast<int>(rng.uniform_int(cfg.transpose_min, cfg.transpose_max));
  record.factor = rng.uniform_real(1.0 - cfg.speed_pct, 1.0 + cfg.speed_pct);

  Transformed step = transpose(score, record.semitones);
  record.dropped_notes += step.dropped_notes;
  step = stretch(step.score, record.factor);
  record.dropped_notes += step.dropped_notes;
  Score current = std::move(step.score);

  record.removed = rng.bernoulli(cfg.p_remove);
  if (record.removed) current = remove_instruments(current, rng);
  record.shuffled = rng.bernoulli(cfg.p_shuffle);
  if (record.shuffled) {
    step = shuffle_melodic(current, rng);
    record.dropped_notes += step.dropped_notes;
    current = std::move(step.score);
  }
  return {std::move(current), record};
}

}  // namespace chipscore

// Acceptance gate: one PASS/FAIL line per criterion, each checked at its
// stated tolerance and runtime budget. Exit status is nonzero if any
// criterion fails.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chipscore/augment.h"
#include "chipscore/error.h"
#include "chipscore/eval.h"
#include "chipscore/event_codec.h"
#include "chipscore/lakh_mapper.h"
#include "chipscore/midi_io.h"
#include "chipscore/ngram_lm.h"
#include "chipscore/pipeline.h"
#include "chipscore/sampler.h"
#include "chipscore/token_io.h"
#include "test_support.h"

namespace chipscore {
namespace {

namespace fs = std::filesystem;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

// Collects failed checks; the first few are reported.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  Outcome outcome(const std::string& summary) const {
    if (count_ == 0) return {Status::kPass, summary};
    std::string detail = std::to_string(count_) + " failed check(s): ";
    for (std::size_t i = 0; i < failures_.size(); ++i) detail += (i ? "; " : "") + failures_[i];
    return {Status::kFail, detail};
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

template <typename T>
std::string str(const T& value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

bool voice_ok(VoiceKind v, std::span<const Note> notes) {
  try {
    check_voice(v, notes);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<fs::path> midi_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".mid" || ext == ".midi")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::optional<fs::path> nesmdb_dir() {
  const char* env = std::getenv("NESMDB_DIR");
  if (env == nullptr || !fs::is_directory(env)) return std::nullopt;
  return fs::path(env);
}

// ---------------------------------------------------------------------------

Outcome vocabulary_exactness() {
  Checker c;
  const Vocab v = build_vocab();
  c.expect(v.size() == 631, "size " + str(v.size()));
  std::vector<int> kinds(8, 0);
  std::set<std::tuple<int, Tick, int, int>> distinct;
  for (EventId id = 0; id < v.size(); ++id) {
    const EventDesc& d = v.describe(id);
    distinct.emplace(static_cast<int>(d.kind), d.ticks, static_cast<int>(d.voice), d.pitch);
    if (id == 0) {
      c.expect(d.kind == EventKind::kBoundary, "ID 0 is not the boundary");
    } else if (id <= 100) {
      c.expect(d.kind == EventKind::kTimeShift && d.ticks == id, "short shift " + str(id));
      ++kinds[0];
    } else if (id <= 190) {
      c.expect(d.kind == EventKind::kTimeShift && d.ticks == 110 + 10 * (id - 101), "medium shift " + str(id));
      ++kinds[1];
    } else if (id <= 370) {
      c.expect(d.kind == EventKind::kTimeShift && d.ticks == 1100 + 100 * (id - 191), "long shift " + str(id));
      ++kinds[2];
    } else {
      struct Block { EventId off; VoiceKind voice; int low; int slot; };
      const Block blocks[] = {{371, VoiceKind::kP1, 33, 3}, {448, VoiceKind::kP2, 33, 4},
                              {525, VoiceKind::kTR, 21, 5}, {614, VoiceKind::kNO, 1, 6}};
      const Block* b = &blocks[0];
      for (const Block& candidate : blocks) {
        if (id >= candidate.off) b = &candidate;
      }
      c.expect(d.voice == b->voice, "voice of " + str(id));
      if (id == b->off) {
        c.expect(d.kind == EventKind::kNoteOff, "off " + str(id));
      } else {
        c.expect(d.kind == EventKind::kNoteOn && d.pitch == b->low + (id - b->off - 1), "on " + str(id));
      }
      ++kinds[static_cast<std::size_t>(b->slot)];
    }
  }
  c.expect(kinds[0] == 100 && kinds[1] == 90 && kinds[2] == 180, "time-shift block sizes");
  c.expect(kinds[3] == 77 && kinds[4] == 77 && kinds[5] == 89 && kinds[6] == 17, "note block sizes");
  c.expect(distinct.size() == 631, "descriptions not distinct");
  return c.outcome("631 IDs; 100+90+180 shifts; 77+77+89+17 note events; 1 boundary");
}

void check_round_trip(const Score& s, Checker& c, Tick& worst_error) {
  const EventSeq once = encode(s);
  const Score back = decode(once).score;
  const EventSeq twice = encode(back);
  c.expect(twice == once, "encode(decode(encode(s))) != encode(s)");
  c.expect(decode(twice).score == back, "decode is not a fixpoint");
  c.expect(validate(once).clean(), "encode output fails validation");

  // Per-gap timing error between consecutive event times (from tick 0).
  auto src = testing::event_times(s);
  auto dst = testing::event_times(back);
  if (src.empty() || src.front() != 0) src.insert(src.begin(), 0);
  if (dst.empty() || dst.front() != 0) dst.insert(dst.begin(), 0);
  c.expect(src.size() == dst.size(), "event time count changed");
  if (src.size() != dst.size()) return;
  for (std::size_t i = 1; i < src.size(); ++i) {
    const Tick gap = src[i] - src[i - 1];
    const Tick err = std::abs((dst[i] - dst[i - 1]) - gap);
    worst_error = std::max(worst_error, err);
    const Tick bound = gap <= 100 ? 0 : gap <= 1000 ? 5 : 50;
    c.expect(err <= bound, "gap " + str(gap) + " off by " + str(err));
  }
  for (VoiceKind v : kAllVoices) {
    c.expect(back.notes(v).size() == s.notes(v).size(), "note count changed");
  }
}

Outcome codec_round_trip() {
  Checker c;
  Rng rng(20240601);
  Tick worst = 0;
  for (int i = 0; i < 1000; ++i) check_round_trip(testing::random_score(rng), c, worst);
  std::size_t real_files = 0;
  if (const auto dir = nesmdb_dir()) {
    for (const fs::path& file : midi_files(*dir)) {
      try {
        check_round_trip(load_nes_score(parse_midi(read_binary_file(file))), c, worst);
        ++real_files;
      } catch (const Error&) {
        // Files the loader rejects are outside the codec contract.
      }
    }
  }
  return c.outcome("1000 random scores + " + str(real_files) + " NES-MDB files; worst gap error " + str(worst) +
                   " ticks");
}

class OracleModel final : public LanguageModel {
 public:
  explicit OracleModel(EventSeq truth) : truth_(std::move(truth)) {}
  TokenDist next_dist(std::span<const EventId> history) const override {
    TokenDist d{};
    d[truth_[history.size()]] = 1.0;
    return d;
  }

 private:
  EventSeq truth_;
};

Outcome perplexity_oracle() {
  Checker c;
  Rng rng(631);
  std::vector<NllTrace> uniform_traces;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    EventSeq seq{0};
    const auto n = rng.uniform_int(1, 2000);
    for (int j = 0; j < n; ++j) seq.push_back(static_cast<EventId>(rng.uniform_int(0, 630)));
    const NllTrace t = nll(UniformModel{}, seq);
    const double single = perplexity(std::vector<NllTrace>{t});
    worst = std::max(worst, std::abs(single - 631.0));
    uniform_traces.push_back(t);

    const OracleModel det(seq);
    c.expect(perplexity(std::vector<NllTrace>{nll(det, seq)}) == 1.0, "deterministic PPL != 1");
  }
  const double corpus_ppl = perplexity(uniform_traces);
  worst = std::max(worst, std::abs(corpus_ppl - 631.0));
  c.expect(worst <= 1e-6, "uniform PPL off by " + str(worst));
  char buf[96];
  std::snprintf(buf, sizeof buf, "uniform PPL %.8f (max deviation %.2e); deterministic PPL 1.0", corpus_ppl, worst);
  return c.outcome(buf);
}

Outcome ngram_correctness() {
  Checker c;
  Rng rng(5150);
  std::size_t grams = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EventSeq> corpus;
    std::size_t total = 0;
    const auto alphabet = rng.uniform_int(2, 630);
    while (true) {
      EventSeq seq{0};
      const auto n = rng.uniform_int(1, 25);
      for (int i = 0; i < n; ++i) seq.push_back(static_cast<EventId>(rng.uniform_int(0, alphabet)));
      if (total + seq.size() > 100) break;
      total += seq.size();
      corpus.push_back(std::move(seq));
    }
    if (corpus.empty()) continue;
    const int order = static_cast<int>(rng.uniform_int(1, 6));
    const auto model = NgramModel::train(corpus, order);
    for (int k = 1; k <= order; ++k) {
      const auto oracle = testing::brute_force_counts(corpus, k);
      std::size_t records = 0;
      for (const auto& [ctx, counts] : model.table(k)) records += counts.next.size();
      c.expect(records == oracle.size(), "table size mismatch at order " + str(k));
      for (const auto& [gram, count] : oracle) {
        ++grams;
        c.expect(model.count(EventSeq(gram.begin(), gram.end() - 1), gram.back()) == count, "count mismatch");
      }
    }
  }

  const auto big = NgramModel::train(testing::deterministic_corpus(77, 100, 200), 5);
  double worst_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    EventSeq ctx;
    const auto n = rng.uniform_int(0, 8);
    for (int j = 0; j < n; ++j) {
      ctx.push_back(rng.bernoulli(0.8) ? static_cast<EventId>(rng.uniform_int(380, 399))
                                       : static_cast<EventId>(rng.uniform_int(0, 630)));
    }
    const TokenDist d = big.next_dist(ctx);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(d.begin(), d.end(), 0.0) - 1.0));
  }
  c.expect(worst_sum <= 1e-9, "next_dist sum off by " + str(worst_sum));

  const auto train = testing::deterministic_corpus(2718, 300, 300);
  auto held_out = testing::deterministic_corpus(2718, 360, 300);
  held_out.erase(held_out.begin(), held_out.begin() + 300);
  const auto five = NgramModel::train(train, 5);
  const auto uni = NgramModel::train(train, 1);
  std::vector<NllTrace> t5, t1;
  for (const auto& s : held_out) {
    t5.push_back(nll(five, s));
    t1.push_back(nll(uni, s));
  }
  const double p5 = perplexity(t5), p1 = perplexity(t1);
  c.expect(p5 < p1, "held-out 5-gram PPL " + str(p5) + " not below unigram " + str(p1));
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu k-grams recounted; max |sum-1| %.1e; held-out PPL 5-gram %.3f < unigram %.3f",
                grams, worst_sum, p5, p1);
  return c.outcome(buf);
}

Outcome nesmdb_sanity() {
  const auto dir = nesmdb_dir();
  if (!dir || !fs::is_directory(*dir / "train") || !fs::is_directory(*dir / "test")) {
    return {Status::kSkip, "NESMDB_DIR with train/ and test/ not present"};
  }
  auto load = [](const fs::path& split) {
    std::vector<EventSeq> corpus;
    for (const fs::path& f : midi_files(split)) {
      try {
        corpus.push_back(encode(load_nes_score(parse_midi(read_binary_file(f)))));
      } catch (const Error&) {
      }
    }
    return corpus;
  };
  const auto train = load(*dir / "train");
  const auto test = load(*dir / "test");
  Checker c;
  c.expect(!train.empty() && !test.empty(), "no loadable files");
  if (train.empty() || test.empty()) return c.outcome("");
  const auto uni = NgramModel::train(train, 1);
  const double ppl = eval_external(test, log_likelihoods(uni, test));
  const CorpusStats stats = corpus_stats(train);
  c.expect(ppl >= 150 && ppl <= 250, "unigram test PPL " + str(ppl) + " outside [150, 250]");
  c.expect(stats.mean_excerpt_seconds >= 7 && stats.mean_excerpt_seconds <= 11,
           "mean excerpt seconds " + str(stats.mean_excerpt_seconds) + " outside [7, 11]");
  char buf[128];
  std::snprintf(buf, sizeof buf, "unigram test PPL %.2f; %.2f s per 512-event excerpt", ppl,
                stats.mean_excerpt_seconds);
  return c.outcome(buf);
}

Outcome mapper_properties() {
  Checker c;
  Rng fixtures(4242);
  std::size_t outputs = 0, skipped = 0;
  for (int run = 0; run < 1000; ++run) {
    testing::RandomSongOptions opt;
    opt.length = 8 * kTicksPerSecond;
    opt.max_monophonic = static_cast<int>(fixtures.uniform_int(0, 5));
    const MultiTrackScore mts = testing::random_song(fixtures, opt);
    const MapperConfig cfg{static_cast<std::size_t>(fixtures.uniform_int(1, 8)), fixtures.next_u64()};
    Rng a(cfg.rng_seed), b(cfg.rng_seed);
    const auto out = map_file(mts, cfg, a, "fixture");
    const auto again = map_file(mts, cfg, b, "fixture");

    const bool has_mono = !find_monophonic_melodic(mts).empty();
    if (!has_mono) {
      ++skipped;
      c.expect(out.empty(), "output without monophonic tracks");
    }
    c.expect(out.size() <= cfg.max_outputs_per_input, "cap exceeded");
    c.expect(out.size() == again.size(), "nondeterministic output count");
    std::set<MelodicAssignment> seen;
    for (std::size_t i = 0; i < out.size(); ++i) {
      ++outputs;
      if (i < again.size()) {
        c.expect(out[i].score == again[i].score && out[i].provenance.melodic == again[i].provenance.melodic &&
                     out[i].provenance.percussion == again[i].provenance.percussion,
                 "nondeterministic output");
      }
      c.expect(seen.insert(out[i].provenance.melodic).second, "duplicate assignment");
      std::set<std::size_t> used;
      for (std::size_t v = 0; v < 3; ++v) {
        const auto& slot = out[i].provenance.melodic[v];
        if (!slot) continue;
        c.expect(used.insert(*slot).second, "track assigned twice");
        c.expect(is_monophonic(mts.tracks[*slot].notes) && !mts.tracks[*slot].is_percussion,
                 "non-monophonic source track");
      }
      for (VoiceKind v : kAllVoices) {
        const auto& notes = out[i].score.notes(v);
        c.expect(voice_ok(v, notes), "range or monophony violation");
        for (const Note& n : notes) c.expect(pitch_range(v).contains(n.pitch), "out-of-range pitch");
      }
      for (const auto& [pitch, type] : out[i].provenance.percussion) {
        c.expect(type >= 1 && type <= 16, "noise type out of range");
      }
      c.expect(validate(encode(out[i].score)).clean(), "mapped output does not encode cleanly");
    }
  }
  return c.outcome("1000 seeded runs, " + str(outputs) + " outputs, " + str(skipped) + " inputs skipped");
}

Outcome augmentation_suite() {
  Checker c;
  Rng scores(777);
  const AugmentConfig cfg;
  const int runs = 10000;
  int removed = 0, shuffled = 0;
  for (int run = 0; run < runs; ++run) {
    testing::RandomScoreOptions opt;
    opt.max_notes_per_voice = 12;
    const Score s = testing::random_score(scores, opt);
    Rng rng(derive_seed(99, static_cast<std::uint64_t>(run)));
    const Augmented a = augment(s, cfg, rng);
    removed += a.record.removed ? 1 : 0;
    shuffled += a.record.shuffled ? 1 : 0;
    for (VoiceKind v : kAllVoices) c.expect(voice_ok(v, a.score.notes(v)), "augment broke closure");

    const Transformed t = transpose(s, a.record.semitones);
    c.expect(t.score.notes(VoiceKind::kNO) == s.notes(VoiceKind::kNO), "transpose touched NO");
    const Transformed sh = shuffle_melodic(s, rng);
    c.expect(sh.score.notes(VoiceKind::kNO) == s.notes(VoiceKind::kNO), "shuffle touched NO");
    const Transformed st = stretch(s, a.record.factor);
    for (VoiceKind v : kAllVoices) {
      c.expect(voice_ok(v, t.score.notes(v)) && voice_ok(v, sh.score.notes(v)) && voice_ok(v, st.score.notes(v)),
               "transform broke closure");
    }
    if (!s.empty()) {
      const Score r = remove_instruments(s, rng);
      c.expect(r.non_empty_voice_count() >= 1, "remove left no voice");
      c.expect(r.non_empty_voice_count() == 1 || r.non_empty_voice_count() < s.non_empty_voice_count(),
               "remove removed nothing");
    }
  }
  const double pr = removed / static_cast<double>(runs);
  const double ps = shuffled / static_cast<double>(runs);
  c.expect(std::abs(pr - 0.5) <= 0.02, "remove frequency " + str(pr));
  c.expect(std::abs(ps - 0.5) <= 0.02, "shuffle frequency " + str(ps));
  char buf[128];
  std::snprintf(buf, sizeof buf, "10000 seeded draws; remove %.4f, shuffle %.4f", pr, ps);
  return c.outcome(buf);
}

Outcome sampler_checks() {
  Checker c;
  Rng rng(8128);
  for (int i = 0; i < 1000; ++i) {
    TokenDist d;
    for (double& p : d) p = std::pow(rng.uniform01(), 3.0);
    const double total = std::accumulate(d.begin(), d.end(), 0.0);
    for (double& p : d) p /= total;
    const auto argmax = static_cast<EventId>(std::max_element(d.begin(), d.end()) - d.begin());
    c.expect(sample_next(d, SamplingParams{0.95, 1}, rng) == argmax, "top_k=1 is not argmax");
  }

  // Chi-square goodness of fit at T = 1, k = 631 over 1e5 draws.
  TokenDist d;
  for (std::size_t e = 0; e < d.size(); ++e) d[e] = 1.0 / static_cast<double>((e % 50) + 1);
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  for (double& p : d) p /= total;
  const int draws = 100000;
  std::vector<int> counts(kVocabSize, 0);
  Rng sampler(31337);
  const SamplingParams full{1.0, static_cast<int>(kVocabSize)};
  for (int i = 0; i < draws; ++i) ++counts[sample_next(d, full, sampler)];
  double stat = 0.0;
  int bins = 0;
  double pooled_expected = 0.0, pooled_observed = 0.0;
  for (std::size_t e = 0; e < d.size(); ++e) {
    const double expected = d[e] * draws;
    if (expected < 5.0) {
      pooled_expected += expected;
      pooled_observed += counts[e];
      continue;
    }
    stat += (counts[e] - expected) * (counts[e] - expected) / expected;
    ++bins;
  }
  if (pooled_expected > 0) {
    stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++bins;
  }
  const boost::math::chi_squared chi(bins - 1);
  const double p_value = boost::math::cdf(boost::math::complement(chi, stat));
  c.expect(p_value > 0.001, "chi-square p = " + str(p_value));

  const auto model = NgramModel::train(testing::deterministic_corpus(55, 60, 300), 5);
  for (int i = 0; i < 100; ++i) {
    EventSeq tmpl;
    const auto n = rng.uniform_int(1, 80);
    for (int j = 0; j < n; ++j) {
      tmpl.push_back(rng.bernoulli(0.6) ? static_cast<EventId>(rng.uniform_int(1, 370))
                                        : static_cast<EventId>(rng.uniform_int(614, 630)));
    }
    Rng gen(static_cast<std::uint64_t>(i));
    const RhythmOptions opt{static_cast<std::size_t>(rng.uniform_int(0, 12)), rng.uniform_real(0.0, 0.9)};
    const EventSeq out = generate_rhythm_conditioned(model, tmpl, SamplingParams{0.95, 32, 2048, 0}, gen, opt);
    c.expect(extract_rhythm(out) == tmpl, "template not preserved");
    for (EventId id : out) {
      c.expect(id != kBoundary && is_valid_event(id), "boundary or invalid ID in rhythm output");
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "argmax x1000; chi-square %.1f on %d dof, p = %.4f; 100 templates preserved", stat,
                bins - 1, p_value);
  return c.outcome(buf);
}

Outcome end_to_end() {
  Checker c;
  // Mapped multi-track fixtures until the corpus holds at least 30 minutes.
  Rng songs(1985);
  std::vector<EventSeq> corpus;
  Tick ticks = 0;
  const Tick target = 30 * 60 * kTicksPerSecond;
  for (int i = 0; ticks < target; ++i) {
    testing::RandomSongOptions opt;
    opt.min_monophonic = 1;
    opt.length = 60 * kTicksPerSecond;
    const MultiTrackScore song = testing::random_song(songs, opt);
    // Through bytes so the MIDI reader is part of the path.
    const MultiTrackScore parsed = parse_midi(write_multitrack_midi(song));
    Rng rng(derive_seed(1985, "song" + std::to_string(i)));
    for (const MappedExample& ex : map_file(parsed, MapperConfig{}, rng, "song")) {
      corpus.push_back(encode(ex.score));
      ticks += sequence_ticks(corpus.back());
    }
  }
  const auto model = NgramModel::train(corpus, 5);

  std::size_t notes = 0, events = 0;
  for (std::uint64_t j = 0; j < 100; ++j) {
    Rng rng(derive_seed(2025, j));
    const EventSeq seq = generate(model, EventSeq{}, SamplingParams{0.95, 32, 2048, 2025}, rng);
    events += seq.size();
    c.expect(validate(seq).out_of_range_ids == 0, "out-of-range ID");
    try {
      const Score decoded = decode(seq).score;
      const Score reloaded = load_nes_score(parse_midi(write_midi(decoded)));
      c.expect(reloaded == decoded, "MIDI round trip changed the score");
      for (VoiceKind v : kAllVoices) c.expect(voice_ok(v, reloaded.notes(v)), "range/monophony violation");
      notes += reloaded.note_count();
    } catch (const Error& e) {
      c.expect(false, std::string("generated sequence failed: ") + e.what());
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "5-gram on %zu sequences (%.1f min); 100 generations, %zu events, %zu notes",
                corpus.size(), static_cast<double>(ticks) / kTicksPerSecond / 60.0, events, notes);
  return c.outcome(buf);
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace chipscore

int main() {
  using namespace chipscore;
  const std::vector<Criterion> criteria = {
      {"vocabulary_exactness", 1, vocabulary_exactness},
      {"codec_round_trip", 30, codec_round_trip},
      {"perplexity_oracle", 1, perplexity_oracle},
      {"ngram_correctness", 60, ngram_correctness},
      {"nesmdb_sanity_band", 600, nesmdb_sanity},
      {"mapper_properties", 60, mapper_properties},
      {"augmentation_suite", 60, augmentation_suite},
      {"sampler", 120, sampler_checks},
      {"end_to_end", 300, end_to_end},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.check();
    } catch (const std::exception& e) {
      outcome = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.status != Status::kSkip && seconds > criterion.budget_seconds) {
      outcome.status = Status::kFail;
      outcome.detail += "; exceeded " + std::to_string(static_cast<int>(criterion.budget_seconds)) + " s budget";
    }
    const char* label = outcome.status == Status::kPass ? "PASS" : outcome.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("%s %s (%.2f s): %s\n", label, criterion.name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.status == Status::kFail ? 1 : 0;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

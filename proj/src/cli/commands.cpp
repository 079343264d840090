// chipscore command-line front end.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "chipscore/augment.h"
#include "chipscore/cli.h"
#include "chipscore/error.h"
#include "chipscore/eval.h"
#include "chipscore/event_codec.h"
#include "chipscore/lakh_mapper.h"
#include "chipscore/midi_io.h"
#include "chipscore/ngram_lm.h"
#include "chipscore/pipeline.h"
#include "chipscore/sampler.h"
#include "chipscore/token_io.h"

namespace chipscore::cli {
namespace {

namespace fs = std::filesystem;

std::size_t thread_count() {
  if (const char* env = std::getenv("CHIPSCORE_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) on up to CHIPSCORE_THREADS workers. Callers
// write results into per-index slots so output order never depends on
// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
}

bool has_midi_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".mid" || ext == ".midi";
}

struct InputFile {
  fs::path path;
  std::string id;  // stable identifier: relative path inside a directory input
};

std::vector<InputFile> collect_inputs(const std::vector<std::string>& inputs, std::ostream& err,
                                      std::size_t& failures) {
  std::vector<InputFile> files;
  for (const std::string& input : inputs) {
    const fs::path root(input);
    std::error_code ec;
    if (fs::is_directory(root, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && has_midi_extension(entry.path())) {
          files.push_back({entry.path(), fs::relative(entry.path(), root).generic_string()});
        }
      }
    } else if (fs::is_regular_file(root, ec)) {
      files.push_back({root, root.filename().generic_string()});
    } else {
      err << "warning: " << input << ": no such file or directory\n";
      ++failures;
    }
  }
  std::sort(files.begin(), files.end(), [](const InputFile& a, const InputFile& b) {
    return a.path.generic_string() < b.path.generic_string();
  });
  return files;
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
  return out;
}

std::string numbered(std::string_view prefix, std::size_t index, std::string_view suffix) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", index);
  return std::string(prefix) + buf + std::string(suffix);
}

int exit_for(std::size_t failures) { return failures == 0 ? kExitOk : kExitPartialFailure; }

// ---------------------------------------------------------------------------

struct ConvertArgs {
  std::vector<std::string> inputs;
  std::string output;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  std::size_t failures = 0;
  const auto files = collect_inputs(a.inputs, err, failures);
  std::vector<std::optional<EventSeq>> encoded(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    try {
      const auto bytes = read_binary_file(files[i].path);
      encoded[i] = encode(load_nes_score(parse_midi(bytes)));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::vector<EventSeq> corpus;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (encoded[i]) {
      corpus.push_back(std::move(*encoded[i]));
    } else {
      err << "warning: " << files[i].path.string() << ": " << errors[i] << "\n";
      ++failures;
    }
  }
  write_token_file(a.output, corpus);
  out << "converted " << corpus.size() << " of " << files.size() << " files\n";
  return exit_for(failures);
}

struct ToMidiArgs {
  std::string input;
  std::string out_dir;
  std::string prefix = "seq_";
};

int cmd_to_midi(const ToMidiArgs& a, std::ostream& out, std::ostream& err) {
  const auto corpus = read_token_file(a.input);
  fs::create_directories(a.out_dir);
  std::size_t failures = 0;
  DecodeDiagnostics total;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      const Decoded decoded = decode(corpus[i]);
      total.orphan_note_offs += decoded.diagnostics.orphan_note_offs;
      total.legato_rearticulations += decoded.diagnostics.legato_rearticulations;
      total.zero_length_notes += decoded.diagnostics.zero_length_notes;
      write_binary_file(fs::path(a.out_dir) / numbered(a.prefix, i, ".mid"), write_midi(decoded.score));
    } catch (const Error& e) {
      err << "warning: line " << i + 1 << ": " << e.what() << "\n";
      ++failures;
    }
  }
  out << "wrote " << corpus.size() - failures << " MIDI files"
      << " (orphan note-offs " << total.orphan_note_offs << ", legato re-articulations "
      << total.legato_rearticulations << ", zero-length notes " << total.zero_length_notes << ")\n";
  return exit_for(failures);
}

struct MapLakhArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string tokens;
  std::size_t cap = 5;
  std::uint64_t seed = 0;
};

int cmd_map_lakh(const MapLakhArgs& a, std::ostream& out, std::ostream& err) {
  MapperConfig cfg;
  cfg.max_outputs_per_input = a.cap;
  cfg.rng_seed = a.seed;
  cfg.validate();
  std::size_t failures = 0;
  const auto files = collect_inputs(a.inputs, err, failures);
  fs::create_directories(a.out_dir);

  std::vector<std::vector<MappedExample>> mapped(files.size());
  std::vector<std::string> errors(files.size());
  std::vector<bool> ok(files.size(), false);
  parallel_for(files.size(), [&](std::size_t i) {
    try {
      const std::uint64_t file_seed = derive_seed(a.seed, files[i].id);
      Rng rng(file_seed);
      mapped[i] = map_file(parse_midi(read_binary_file(files[i].path)), cfg, rng, files[i].id);
      for (MappedExample& ex : mapped[i]) ex.provenance.seed = file_seed;
      ok[i] = true;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::string provenance;
  std::vector<EventSeq> corpus;
  std::size_t outputs = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!ok[i]) {
      err << "warning: " << files[i].path.string() << ": " << errors[i] << "\n";
      ++failures;
      continue;
    }
    const std::string stem = sanitize(files[i].path.stem().string());
    for (std::size_t k = 0; k < mapped[i].size(); ++k) {
      const std::string name = numbered("", i, "_" + stem + "_" + std::to_string(k) + ".mid");
      write_binary_file(fs::path(a.out_dir) / name, write_midi(mapped[i][k].score));
      provenance += name + "\t" + format_provenance(mapped[i][k].provenance) + "\n";
      if (!a.tokens.empty()) corpus.push_back(encode(mapped[i][k].score));
      ++outputs;
    }
  }
  write_text_file(fs::path(a.out_dir) / "provenance.tsv", provenance);
  if (!a.tokens.empty()) write_token_file(a.tokens, corpus);
  out << "mapped " << files.size() << " inputs to " << outputs << " examples\n";
  return exit_for(failures);
}

struct AugmentArgs {
  std::string input;
  std::string output;
  AugmentConfig cfg;
  std::size_t epochs = 1;
  std::string mode = "per-epoch";
};

int cmd_augment(const AugmentArgs& a, std::ostream& out, std::ostream&) {
  a.cfg.validate();
  const auto corpus = read_token_file(a.input);
  const bool per_epoch = a.mode == "per-epoch";
  std::vector<EventSeq> result(corpus.size() * a.epochs);
  parallel_for(result.size(), [&](std::size_t slot) {
    const std::size_t epoch = slot / corpus.size();
    const std::size_t line = slot % corpus.size();
    const std::uint64_t base = per_epoch ? derive_seed(a.cfg.rng_seed, epoch) : a.cfg.rng_seed;
    Rng rng(derive_seed(base, line));
    result[slot] = encode(augment(decode(corpus[line]).score, a.cfg, rng).score);
  });
  write_token_file(a.output, result);
  out << "wrote " << result.size() << " augmented sequences\n";
  return kExitOk;
}

struct ExcerptArgs {
  std::string input;
  std::string output;
  std::size_t length = kDefaultExcerptLength;
};

int cmd_excerpt(const ExcerptArgs& a, std::ostream& out, std::ostream&) {
  const auto excerpts = make_excerpts(read_token_file(a.input), a.length);
  std::vector<EventSeq> lines;
  std::string index = "source_line\toffset\tlength\tshort\n";
  std::size_t short_count = 0;
  for (const Excerpt& e : excerpts) {
    lines.push_back(e.events);
    index += std::to_string(e.source_line + 1) + "\t" + std::to_string(e.offset) + "\t" +
             std::to_string(e.events.size()) + "\t" + (e.is_short ? "1" : "0") + "\n";
    short_count += e.is_short ? 1 : 0;
  }
  write_token_file(a.output, lines);
  write_text_file(a.output + ".index.tsv", index);
  out << "wrote " << excerpts.size() << " excerpts (" << short_count << " short)\n";
  return kExitOk;
}

struct TrainArgs {
  std::string input;
  std::string output;
  int order = 5;
  double epsilon = 0.01;
  std::vector<double> lambdas;
};

int cmd_train_ngram(const TrainArgs& a, std::ostream& out, std::ostream&) {
  const auto corpus = read_token_file(a.input);
  const NgramModel model = NgramModel::train(corpus, a.order, {a.lambdas, a.epsilon});
  write_binary_file(a.output, model.serialize());
  out << "trained order-" << model.order() << " model on " << model.total_tokens() << " tokens\n";
  return kExitOk;
}

struct EvalArgs {
  std::string input;
  std::string model;
  bool uniform = false;
  std::string likelihoods;
  std::string write_likelihoods;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  const int sources = (a.model.empty() ? 0 : 1) + (a.uniform ? 1 : 0) + (a.likelihoods.empty() ? 0 : 1);
  if (sources != 1) throw PreconditionError("give exactly one of --model, --uniform, --likelihoods");
  const auto corpus = read_token_file(a.input);
  std::size_t tokens = 0;
  for (const EventSeq& seq : corpus) tokens += seq.empty() ? 0 : seq.size() - 1;

  double ppl = 0.0;
  if (!a.likelihoods.empty()) {
    ppl = eval_external(corpus, parse_likelihoods(read_text_file(a.likelihoods)));
  } else {
    std::optional<NgramModel> ngram;
    UniformModel uniform;
    if (!a.model.empty()) ngram = NgramModel::deserialize(read_binary_file(a.model));
    const LanguageModel& model = ngram ? static_cast<const LanguageModel&>(*ngram) : uniform;
    const auto lines = log_likelihoods(model, corpus);
    if (!a.write_likelihoods.empty()) write_text_file(a.write_likelihoods, format_likelihoods(lines));
    ppl = eval_external(corpus, lines);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", ppl);
  out << "perplexity\t" << buf << "\ntokens\t" << tokens << "\n";
  return kExitOk;
}

struct GenerateArgs {
  std::string model;
  bool uniform = false;
  std::string output;
  std::size_t count = 1;
  std::string prime_file;
  std::string template_file;
  bool extract_rhythm = false;
  SamplingParams params;
  RhythmOptions rhythm;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream&) {
  if (a.model.empty() == !a.uniform) throw PreconditionError("give exactly one of --model, --uniform");
  if (!a.prime_file.empty() && !a.template_file.empty()) {
    throw PreconditionError("--prime-file and --template-file are mutually exclusive");
  }
  a.params.validate();
  std::optional<NgramModel> ngram;
  UniformModel uniform;
  if (!a.model.empty()) ngram = NgramModel::deserialize(read_binary_file(a.model));
  const LanguageModel& model = ngram ? static_cast<const LanguageModel&>(*ngram) : uniform;

  std::vector<EventSeq> seeds{EventSeq{}};
  if (!a.prime_file.empty()) seeds = read_token_file(a.prime_file);
  if (!a.template_file.empty()) {
    seeds = read_token_file(a.template_file);
    if (a.extract_rhythm) {
      for (EventSeq& s : seeds) s = extract_rhythm(s);
    }
  }
  std::vector<EventSeq> result(seeds.size() * a.count);
  parallel_for(result.size(), [&](std::size_t j) {
    Rng rng(derive_seed(a.params.seed, j));
    const EventSeq& input = seeds[j / a.count];
    if (!a.template_file.empty()) {
      result[j] = generate_rhythm_conditioned(model, input, a.params, rng, a.rhythm);
    } else {
      result[j] = generate(model, prime_from_sequence(input), a.params, rng);
    }
  });
  write_token_file(a.output, result);
  out << "generated " << result.size() << " sequences\n";
  return kExitOk;
}

struct StatsArgs {
  std::string input;
  std::size_t length = kDefaultExcerptLength;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  const CorpusStats s = corpus_stats(read_token_file(a.input), a.length);
  char seconds[64];
  std::snprintf(seconds, sizeof seconds, "%.6f", s.mean_excerpt_seconds);
  char total[64];
  std::snprintf(total, sizeof total, "%.6f", s.total_seconds());
  out << "sequences\t" << s.sequences << "\n"
      << "events\t" << s.events << "\n"
      << "time_shift_events\t" << s.time_shift_events << "\n"
      << "note_events\t" << s.note_events << "\n"
      << "boundary_events\t" << s.boundary_events << "\n"
      << "total_seconds\t" << total << "\n"
      << "excerpts\t" << s.excerpts << "\n"
      << "full_excerpts\t" << s.full_excerpts << "\n"
      << "mean_excerpt_seconds\t" << seconds << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tokenize, map, model and generate four-voice NES chiptune scores"};
  app.name(args.empty() ? "chipscore" : args.front());
  app.require_subcommand(1);
  std::function<int()> action;

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "Encode NES-MDB style MIDI files as token lines");
  c->add_option("inputs", convert.inputs, "MIDI files or directories")->required();
  c->add_option("-o,--output", convert.output, "Token file to write")->required();
  c->callback([&] { action = [&] { return cmd_convert(convert, out, err); }; });

  ToMidiArgs to_midi;
  auto* t = app.add_subcommand("to-midi", "Decode token lines into MIDI files");
  t->add_option("input", to_midi.input, "Token file")->required();
  t->add_option("--out-dir", to_midi.out_dir, "Directory for MIDI files")->required();
  t->add_option("--prefix", to_midi.prefix, "File name prefix");
  t->callback([&] { action = [&] { return cmd_to_midi(to_midi, out, err); }; });

  MapLakhArgs map;
  auto* m = app.add_subcommand("map-lakh", "Map arbitrary-ensemble MIDI onto the NES ensemble");
  m->add_option("inputs", map.inputs, "MIDI files or directories")->required();
  m->add_option("--out-dir", map.out_dir, "Directory for mapped MIDI files and provenance.tsv")->required();
  m->add_option("--tokens", map.tokens, "Also write the mapped examples as a token file");
  m->add_option("--cap", map.cap, "Maximum outputs per input")->capture_default_str();
  m->add_option("--seed", map.seed, "Global seed")->capture_default_str();
  m->callback([&] { action = [&] { return cmd_map_lakh(map, out, err); }; });

  AugmentArgs aug;
  auto* g = app.add_subcommand("augment", "Apply randomized augmentation to token lines");
  g->add_option("input", aug.input, "Token file")->required();
  g->add_option("-o,--output", aug.output, "Token file to write")->required();
  g->add_option("--seed", aug.cfg.rng_seed)->capture_default_str();
  g->add_option("--epochs", aug.epochs, "Augmented copies of the corpus")->capture_default_str()
      ->check(CLI::PositiveNumber);
  g->add_option("--mode", aug.mode, "per-epoch draws fresh augmentations for every copy; once reuses them")
      ->capture_default_str()->check(CLI::IsMember({"per-epoch", "once"}));
  g->add_option("--transpose-min", aug.cfg.transpose_min)->capture_default_str();
  g->add_option("--transpose-max", aug.cfg.transpose_max)->capture_default_str();
  g->add_option("--speed-pct", aug.cfg.speed_pct)->capture_default_str();
  g->add_option("--p-remove", aug.cfg.p_remove)->capture_default_str();
  g->add_option("--p-shuffle", aug.cfg.p_shuffle)->capture_default_str();
  g->callback([&] { action = [&] { return cmd_augment(aug, out, err); }; });

  ExcerptArgs excerpt;
  auto* e = app.add_subcommand("excerpt", "Cut token lines into fixed-length training excerpts");
  e->add_option("input", excerpt.input, "Token file")->required();
  e->add_option("-o,--output", excerpt.output, "Token file to write (index goes to <output>.index.tsv)")
      ->required();
  e->add_option("--excerpt-len", excerpt.length)->capture_default_str()->check(CLI::PositiveNumber);
  e->callback([&] { action = [&] { return cmd_excerpt(excerpt, out, err); }; });

  TrainArgs train;
  auto* tr = app.add_subcommand("train-ngram", "Train an interpolated n-gram model");
  tr->add_option("input", train.input, "Token file")->required();
  tr->add_option("-o,--output", train.output, "Model file to write")->required();
  tr->add_option("--order", train.order)->capture_default_str();
  tr->add_option("--epsilon", train.epsilon, "Uniform floor mass")->capture_default_str();
  tr->add_option("--lambdas", train.lambdas, "Comma-separated weights, one per order")->delimiter(',');
  tr->callback([&] { action = [&] { return cmd_train_ngram(train, out, err); }; });

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "Report perplexity of a token file");
  v->add_option("input", ev.input, "Token file")->required();
  v->add_option("--model", ev.model, "n-gram model file");
  v->add_flag("--uniform", ev.uniform, "Score with the uniform 631-way model");
  v->add_option("--likelihoods", ev.likelihoods, "Externally computed likelihood file");
  v->add_option("--write-likelihoods", ev.write_likelihoods, "Write per-token log-likelihoods");
  v->callback([&] { action = [&] { return cmd_eval(ev, out, err); }; });

  GenerateArgs gen;
  auto* n = app.add_subcommand("generate", "Sample new token sequences");
  n->add_option("--model", gen.model, "n-gram model file");
  n->add_flag("--uniform", gen.uniform, "Sample from the uniform model");
  n->add_option("-o,--output", gen.output, "Token file to write")->required();
  n->add_option("--count", gen.count, "Sequences per prime/template line")->capture_default_str()
      ->check(CLI::PositiveNumber);
  n->add_option("--prime-file", gen.prime_file, "Token lines to continue");
  n->add_option("--template-file", gen.template_file, "Rhythm templates (time-shift and noise IDs)");
  n->add_flag("--extract-rhythm", gen.extract_rhythm, "Reduce template lines to their rhythm events");
  n->add_option("--temperature", gen.params.temperature)->capture_default_str();
  n->add_option("--top-k", gen.params.top_k)->capture_default_str();
  n->add_option("--max-events", gen.params.max_events)->capture_default_str();
  n->add_option("--seed", gen.params.seed)->capture_default_str();
  n->add_option("--slot-cap", gen.rhythm.slot_cap)->capture_default_str();
  n->add_option("--min-melodic-mass", gen.rhythm.min_melodic_mass)->capture_default_str();
  n->callback([&] { action = [&] { return cmd_generate(gen, out, err); }; });

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Corpus statistics");
  s->add_option("input", stats.input, "Token file")->required();
  s->add_option("--excerpt-len", stats.length)->capture_default_str()->check(CLI::PositiveNumber);
  s->callback([&] { action = [&] { return cmd_stats(stats, out, err); }; });

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
}

}  // namespace chipscore::cli

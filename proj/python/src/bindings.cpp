// Python bindings. Scores cross the boundary as dicts mapping voice names
// ("P1", "P2", "TR", "NO") to lists of (pitch, on, off) tuples; token
// sequences as lists of ints; MIDI files as bytes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <tuple>

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

namespace py = pybind11;
using namespace chipscore;

namespace {

using NoteTuple = std::tuple<int, Tick, Tick>;
using ScoreDict = std::map<std::string, std::vector<NoteTuple>>;

VoiceKind voice_from_name(const std::string& name) {
  for (VoiceKind v : kAllVoices) {
    if (voice_name(v) == name) return v;
  }
  throw py::value_error("unknown voice '" + name + "'; expected P1, P2, TR or NO");
}

Score to_score(const ScoreDict& dict) {
  Score::Parts parts;
  for (const auto& [name, notes] : dict) {
    auto& out = parts[index_of(voice_from_name(name))];
    for (const auto& [pitch, on, off] : notes) out.push_back({pitch, on, off});
  }
  return Score(std::move(parts));
}

ScoreDict to_dict(const Score& score) {
  ScoreDict dict;
  for (VoiceKind v : kAllVoices) {
    auto& out = dict[std::string(voice_name(v))];
    for (const Note& n : score.notes(v)) out.emplace_back(n.pitch, n.on, n.off);
  }
  return dict;
}

std::span<const std::uint8_t> as_span(const py::bytes& data) {
  const std::string_view view(data);
  return {reinterpret_cast<const std::uint8_t*>(view.data()), view.size()};
}

py::bytes to_bytes(const std::vector<std::uint8_t>& data) {
  return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

py::dict track_dict(const Track& track) {
  py::dict d;
  d["name"] = track.name;
  d["program"] = track.program;
  d["is_percussion"] = track.is_percussion;
  std::vector<NoteTuple> notes;
  for (const Note& n : track.notes) notes.emplace_back(n.pitch, n.on, n.off);
  d["notes"] = notes;
  return d;
}

SamplingParams sampling(double temperature, int top_k, std::size_t max_events, std::uint64_t seed) {
  SamplingParams p{temperature, top_k, max_events, seed};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Event-based tokenization, n-gram modelling and sampling for NES chiptune scores";

  auto base = py::register_exception<Error>(m, "ChipscoreError", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ScoreError>(m, "ScoreError", base.ptr());
  py::register_exception<MidiParseError>(m, "MidiParseError", base.ptr());
  py::register_exception<DecodeError>(m, "DecodeError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<ModelFormatError>(m, "ModelFormatError", base.ptr());

  m.attr("VOCAB_SIZE") = kVocabSize;
  m.attr("TICKS_PER_SECOND") = kTicksPerSecond;

  m.def("event_name", &event_name, py::arg("event"));
  m.def("time_shift_values", [] {
    const auto values = vocab().time_shift_values();
    return std::vector<Tick>(values.begin(), values.end());
  });
  m.def("quantize_gap", &quantize_gap, py::arg("ticks"));

  m.def("normalize_score", [](const ScoreDict& d) { return to_dict(to_score(d)); }, py::arg("score"),
        "Validates a score dict and returns it with every voice sorted.");
  m.def("encode", [](const ScoreDict& d) { return encode(to_score(d)); }, py::arg("score"));
  m.def(
      "decode",
      [](const EventSeq& events) {
        const Decoded d = decode(events);
        py::dict diag;
        diag["orphan_note_offs"] = d.diagnostics.orphan_note_offs;
        diag["legato_rearticulations"] = d.diagnostics.legato_rearticulations;
        diag["zero_length_notes"] = d.diagnostics.zero_length_notes;
        diag["stopped_at_interior_boundary"] = d.diagnostics.stopped_at_interior_boundary;
        return py::make_tuple(to_dict(d.score), diag);
      },
      py::arg("events"));
  m.def(
      "validate",
      [](const EventSeq& events) {
        const ValidationReport r = validate(events);
        py::dict d;
        d["orphan_note_offs"] = r.orphan_note_offs;
        d["legato_rearticulations"] = r.legato_rearticulations;
        d["interior_boundaries"] = r.interior_boundaries;
        d["ordering_violations"] = r.ordering_violations;
        d["out_of_range_ids"] = r.out_of_range_ids;
        d["zero_length_notes"] = r.zero_length_notes;
        d["clean"] = r.clean();
        return d;
      },
      py::arg("events"));

  m.def(
      "parse_midi",
      [](const py::bytes& data) {
        const MultiTrackScore mts = parse_midi(as_span(data));
        py::list tracks;
        for (const Track& t : mts.tracks) tracks.append(track_dict(t));
        return tracks;
      },
      py::arg("data"), "Returns one dict per (track chunk, channel) with notes in 44100 Hz ticks.");
  m.def(
      "load_nes_score",
      [](const py::bytes& data) { return to_dict(load_nes_score(parse_midi(as_span(data)))); },
      py::arg("data"));
  m.def("write_midi", [](const ScoreDict& d) { return to_bytes(write_midi(to_score(d))); }, py::arg("score"));

  m.def("parse_tokens", &parse_tokens, py::arg("text"));
  m.def("format_tokens", [](const std::vector<EventSeq>& c) { return format_tokens(c); }, py::arg("corpus"));

  py::class_<LanguageModel>(m, "LanguageModel")
      .def("next_dist",
           [](const LanguageModel& lm, const EventSeq& h) {
             const TokenDist dist = lm.next_dist(h);
             return std::vector<double>(dist.begin(), dist.end());
           },
           py::arg("history"))
      .def("prob",
           [](const LanguageModel& lm, const EventSeq& h, EventId e) {
             if (!is_valid_event(e)) throw PreconditionError("event ID out of range");
             return lm.prob(h, e);
           },
           py::arg("history"), py::arg("event"));

  py::class_<UniformModel, LanguageModel>(m, "UniformModel").def(py::init<>());

  py::class_<NgramModel, LanguageModel>(m, "NgramModel")
      .def_static(
          "train",
          [](const std::vector<EventSeq>& corpus, int order, std::vector<double> lambdas, double epsilon) {
            return NgramModel::train(corpus, order, {std::move(lambdas), epsilon});
          },
          py::arg("corpus"), py::arg("order") = 5, py::arg("lambdas") = std::vector<double>{},
          py::arg("epsilon") = 0.01)
      .def_static("default_lambdas", &NgramModel::default_lambdas, py::arg("order"))
      .def_property_readonly("order", &NgramModel::order)
      .def_property_readonly("epsilon", &NgramModel::epsilon)
      .def_property_readonly("lambdas", &NgramModel::lambdas)
      .def_property_readonly("total_tokens", &NgramModel::total_tokens)
      .def("count", [](const NgramModel& lm, const EventSeq& ctx, EventId e) { return lm.count(ctx, e); },
           py::arg("context"), py::arg("event"))
      .def("serialize", [](const NgramModel& lm) { return to_bytes(lm.serialize()); })
      .def_static("deserialize", [](const py::bytes& b) { return NgramModel::deserialize(as_span(b)); },
                  py::arg("data"))
      .def("__eq__", [](const NgramModel& a, const NgramModel& b) { return a == b; });

  m.def("nll", [](const LanguageModel& lm, const EventSeq& seq) { return nll(lm, seq); }, py::arg("model"),
        py::arg("events"));
  m.def("perplexity", [](const std::vector<NllTrace>& t) { return perplexity(t); }, py::arg("traces"));
  m.def(
      "log_likelihoods",
      [](const LanguageModel& lm, const std::vector<EventSeq>& corpus) { return log_likelihoods(lm, corpus); },
      py::arg("model"), py::arg("corpus"));
  m.def(
      "eval_external",
      [](const std::vector<EventSeq>& tokens, const std::vector<std::vector<double>>& lls) {
        return eval_external(tokens, lls);
      },
      py::arg("tokens"), py::arg("log_likelihoods"));

  m.def("derive_seed", py::overload_cast<std::uint64_t, std::uint64_t>(&derive_seed), py::arg("base"),
        py::arg("index"));
  m.def(
      "generate",
      [](const LanguageModel& lm, const EventSeq& prime, double temperature, int top_k,
         std::size_t max_events, std::uint64_t seed) {
        const SamplingParams p = sampling(temperature, top_k, max_events, seed);
        Rng rng(seed);
        return generate(lm, prime, p, rng);
      },
      py::arg("model"), py::arg("prime") = EventSeq{}, py::arg("temperature") = 0.95, py::arg("top_k") = 32,
      py::arg("max_events") = 2048, py::arg("seed") = 0);
  m.def(
      "generate_rhythm_conditioned",
      [](const LanguageModel& lm, const EventSeq& rhythm, double temperature, int top_k, std::uint64_t seed,
         std::size_t slot_cap, double min_melodic_mass) {
        const SamplingParams p = sampling(temperature, top_k, 2048, seed);
        Rng rng(seed);
        return generate_rhythm_conditioned(lm, rhythm, p, rng, {slot_cap, min_melodic_mass});
      },
      py::arg("model"), py::arg("template"), py::arg("temperature") = 0.95, py::arg("top_k") = 32,
      py::arg("seed") = 0, py::arg("slot_cap") = 8, py::arg("min_melodic_mass") = 0.5);
  m.def("extract_rhythm", [](const EventSeq& e) { return extract_rhythm(e); }, py::arg("events"));

  m.def(
      "transpose",
      [](const ScoreDict& d, int semitones) {
        const Transformed t = transpose(to_score(d), semitones);
        return py::make_tuple(to_dict(t.score), t.dropped_notes);
      },
      py::arg("score"), py::arg("semitones"));
  m.def(
      "stretch",
      [](const ScoreDict& d, double factor) {
        const Transformed t = stretch(to_score(d), factor);
        return py::make_tuple(to_dict(t.score), t.dropped_notes);
      },
      py::arg("score"), py::arg("factor"));
  m.def(
      "augment",
      [](const ScoreDict& d, std::uint64_t seed, int transpose_min, int transpose_max, double speed_pct,
         double p_remove, double p_shuffle) {
        const AugmentConfig cfg{transpose_min, transpose_max, speed_pct, p_remove, p_shuffle, seed};
        Rng rng(seed);
        const Augmented a = augment(to_score(d), cfg, rng);
        py::dict record;
        record["semitones"] = a.record.semitones;
        record["factor"] = a.record.factor;
        record["removed"] = a.record.removed;
        record["shuffled"] = a.record.shuffled;
        record["dropped_notes"] = a.record.dropped_notes;
        return py::make_tuple(to_dict(a.score), record);
      },
      py::arg("score"), py::arg("seed") = 0, py::arg("transpose_min") = -6, py::arg("transpose_max") = 5,
      py::arg("speed_pct") = 0.05, py::arg("p_remove") = 0.5, py::arg("p_shuffle") = 0.5);

  m.def(
      "map_file",
      [](const py::bytes& data, std::size_t cap, std::uint64_t seed, const std::string& source_id) {
        const MapperConfig cfg{cap, seed};
        Rng rng(seed);
        py::list out;
        for (MappedExample& ex : map_file(parse_midi(as_span(data)), cfg, rng, source_id)) {
          ex.provenance.seed = seed;
          out.append(py::make_tuple(to_dict(ex.score), format_provenance(ex.provenance)));
        }
        return out;
      },
      py::arg("data"), py::arg("cap") = 5, py::arg("seed") = 0, py::arg("source_id") = "",
      "Maps an arbitrary-ensemble MIDI file; returns (score, provenance line) pairs.");

  m.def(
      "corpus_stats",
      [](const std::vector<EventSeq>& corpus, std::size_t excerpt_length) {
        const CorpusStats s = corpus_stats(corpus, excerpt_length);
        py::dict d;
        d["sequences"] = s.sequences;
        d["events"] = s.events;
        d["total_seconds"] = s.total_seconds();
        d["excerpts"] = s.excerpts;
        d["full_excerpts"] = s.full_excerpts;
        d["mean_excerpt_seconds"] = s.mean_excerpt_seconds;
        return d;
      },
      py::arg("corpus"), py::arg("excerpt_length") = kDefaultExcerptLength);
}

#include "chipscore/eval.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "chipscore/error.h"
#include "chipscore/token_io.h"

namespace chipscore {

TokenDist UniformModel::next_dist(std::span<const EventId>) const {
  TokenDist dist;
  dist.fill(1.0 / static_cast<double>(kVocabSize));
  return dist;
}

double UniformModel::prob(std::span<const EventId>, EventId) const {
  return 1.0 / static_cast<double>(kVocabSize);
}

NllTrace nll(const LanguageModel& model, std::span<const EventId> seq) {
  if (seq.size() < 2) throw PreconditionError("likelihood needs a sequence of at least two events");
  if (seq[0] != kBoundary) throw PreconditionError("sequence must begin with the boundary token");
  NllTrace trace;
  trace.reserve(seq.size() - 1);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (!is_valid_event(seq[i])) throw PreconditionError("event ID out of range at position " + std::to_string(i));
    const double p = model.prob(seq.first(i), seq[i]);
    if (!(p > 0.0)) throw PreconditionError("model assigned zero probability at position " + std::to_string(i));
    trace.push_back(std::max(0.0, -std::log(p)));
  }
  return trace;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double perplexity(std::span<const NllTrace> traces) {
  std::vector<double> all;
  for (const NllTrace& t : traces) all.insert(all.end(), t.begin(), t.end());
  if (all.empty()) throw PreconditionError("perplexity of zero tokens is undefined");
  return std::exp(pairwise_sum(all) / static_cast<double>(all.size()));
}

std::vector<std::vector<double>> log_likelihoods(const LanguageModel& model,
                                                 std::span<const EventSeq> corpus) {
  std::vector<std::vector<double>> lines;
  lines.reserve(corpus.size());
  for (const EventSeq& seq : corpus) {
    std::vector<double> line;
    for (double v : nll(model, seq)) line.push_back(-v);
    lines.push_back(std::move(line));
  }
  return lines;
}

double eval_external(std::span<const EventSeq> tokens,
                     std::span<const std::vector<double>> log_likelihoods) {
  if (tokens.size() != log_likelihoods.size()) {
    const std::size_t first_bad = std::min(tokens.size(), log_likelihoods.size()) + 1;
    throw FormatError(first_bad, "token file has " + std::to_string(tokens.size()) +
                                     " lines but likelihood file has " +
                                     std::to_string(log_likelihoods.size()));
  }
  std::vector<NllTrace> traces;
  traces.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t line = i + 1;
    if (tokens[i].empty()) throw FormatError(line, "empty token sequence");
    if (log_likelihoods[i].size() != tokens[i].size() - 1) {
      throw FormatError(line, "expected " + std::to_string(tokens[i].size() - 1) +
                                  " likelihoods for " + std::to_string(tokens[i].size()) +
                                  " tokens, found " + std::to_string(log_likelihoods[i].size()));
    }
    NllTrace trace;
    for (double v : log_likelihoods[i]) {
      if (!(v <= 0.0)) throw FormatError(line, "log-likelihood " + std::to_string(v) + " is above 0");
      trace.push_back(-v);
    }
    traces.push_back(std::move(trace));
  }
  return perplexity(traces);
}

double eval_external(const std::filesystem::path& token_file,
                     const std::filesystem::path& likelihood_file) {
  const auto tokens = read_token_file(token_file);
  const auto likelihoods = parse_likelihoods(read_text_file(likelihood_file));
  return eval_external(tokens, likelihoods);
}

}  // namespace chipscore

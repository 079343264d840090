// Likelihood and perplexity evaluation.

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "chipscore/event_codec.h"
#include "chipscore/language_model.h"

namespace chipscore {

/// Natural-log negative log-likelihoods of e_2..e_n, each conditioned on
/// the full prefix. The leading boundary token is conditioned on, never
/// predicted.
using NllTrace = std::vector<double>;

/// Requires seq.size() >= 2 and seq[0] == 0 (PreconditionError otherwise).
NllTrace nll(const LanguageModel& model, std::span<const EventId> seq);

/// exp of the token-weighted mean over all traces. Throws PreconditionError
/// when the traces hold no tokens.
double perplexity(std::span<const NllTrace> traces);

/// Pairwise summation in input order.
double pairwise_sum(std::span<const double> values);

/// Per-line natural-log likelihoods (the external adapter format) for a
/// corpus under an internal model.
std::vector<std::vector<double>> log_likelihoods(const LanguageModel& model,
                                                 std::span<const EventSeq> corpus);

/// Perplexity from externally computed likelihoods. Line i of
/// `log_likelihoods` must hold exactly tokens[i].size() - 1 values, each
/// <= 0. Throws FormatError naming the first bad line.
double eval_external(std::span<const EventSeq> tokens,
                     std::span<const std::vector<double>> log_likelihoods);
double eval_external(const std::filesystem::path& token_file,
                     const std::filesystem::path& likelihood_file);

}  // namespace chipscore

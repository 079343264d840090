// Text formats shared with external tools: one sequence per line.
//
// Token files hold space-separated decimal event IDs. Likelihood files hold
// space-separated natural-log likelihoods, line-aligned with a token file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chipscore/event_codec.h"

namespace chipscore {

/// Throws FormatError for non-numeric fields or IDs above 630.
std::vector<EventSeq> parse_tokens(std::string_view text);
std::string format_tokens(std::span<const EventSeq> corpus);

std::vector<std::vector<double>> parse_likelihoods(std::string_view text);
std::string format_likelihoods(std::span<const std::vector<double>> lines);

std::vector<EventSeq> read_token_file(const std::filesystem::path& path);
void write_token_file(const std::filesystem::path& path, std::span<const EventSeq> corpus);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace chipscore

#include "chipscore/token_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "chipscore/error.h"

namespace chipscore {
namespace {

// Splits on '\n', dropping one trailing empty line and any '\r'.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

void append_double(std::string& out, double value) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, result.ptr);
}

}  // namespace

std::vector<EventSeq> parse_tokens(std::string_view text) {
  std::vector<EventSeq> corpus;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    EventSeq seq;
    for (std::string_view field : split_fields(lines[n])) {
      unsigned value = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError(n + 1, "not an event ID: \"" + std::string(field) + "\"");
      }
      if (!is_valid_event(value)) throw FormatError(n + 1, "event ID " + std::to_string(value) + " above 630");
      seq.push_back(static_cast<EventId>(value));
    }
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

std::string format_tokens(std::span<const EventSeq> corpus) {
  std::string out;
  for (const EventSeq& seq : corpus) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i > 0) out.push_back(' ');
      out += std::to_string(seq[i]);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<std::vector<double>> parse_likelihoods(std::string_view text) {
  std::vector<std::vector<double>> lines_out;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::vector<double> values;
    for (std::string_view field : split_fields(lines[n])) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw FormatError(n + 1, "not a finite number: \"" + std::string(field) + "\"");
      }
      values.push_back(value);
    }
    lines_out.push_back(std::move(values));
  }
  return lines_out;
}

std::string format_likelihoods(std::span<const std::vector<double>> lines) {
  std::string out;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out.push_back(' ');
      append_double(out, line[i]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<EventSeq> read_token_file(const std::filesystem::path& path) {
  return parse_tokens(read_text_file(path));
}

void write_token_file(const std::filesystem::path& path, std::span<const EventSeq> corpus) {
  write_text_file(path, format_tokens(corpus));
}

}  // namespace chipscore

#include "chipscore/ngram_lm.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "chipscore/error.h"

namespace chipscore {
namespace {

constexpr char kMagic[4] = {'N', 'G', 'L', 'M'};
constexpr std::uint16_t kFormatVersion = 1;

void check_options(int order, const std::vector<double>& lambdas, double epsilon) {
  if (order < 1 || order > 0xFFFF) throw PreconditionError("n-gram order must be in [1, 65535]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (lambdas.size() != static_cast<std::size_t>(order)) {
    throw PreconditionError("expected " + std::to_string(order) + " interpolation weights, got " +
                            std::to_string(lambdas.size()));
  }
  double sum = 0.0;
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw PreconditionError("interpolation weights must be finite and >= 0");
    sum += l;
  }
  if (!(sum > 0.0)) throw PreconditionError("interpolation weights must not all be zero");
}

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void uint(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
  void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T uint(const char* what) {
    need(sizeof(T), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return value;
  }
  double f64(const char* what) { return std::bit_cast<double>(uint<std::uint64_t>(what)); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw ModelFormatError(ModelFormatError::Kind::kTruncated,
                             std::string("model file truncated while reading ") + what + " at byte " +
                                 std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

[[noreturn]] void corrupt(const std::string& message) {
  throw ModelFormatError(ModelFormatError::Kind::kCorrupt, "corrupt model file: " + message);
}

}  // namespace

std::size_t NgramModel::ContextHash::operator()(const Context& context) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ context.size();
  for (EventId id : context) {
    h ^= id;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::vector<double> NgramModel::default_lambdas(int order) {
  std::vector<double> lambdas;
  for (int o = 0; o < order; ++o) lambdas.push_back(std::ldexp(1.0, std::min(o, 1000)));
  const double sum = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
  for (double& l : lambdas) l /= sum;
  return lambdas;
}

NgramModel NgramModel::train(std::span<const EventSeq> corpus, int order, const NgramOptions& options) {
  std::vector<double> lambdas = options.lambdas.empty() ? default_lambdas(order) : options.lambdas;
  check_options(order, lambdas, options.epsilon);

  NgramModel model;
  model.order_ = order;
  model.epsilon_ = options.epsilon;
  const double sum = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
  for (double& l : lambdas) l /= sum;
  model.lambdas_ = std::move(lambdas);
  model.tables_.resize(static_cast<std::size_t>(order));

  const std::size_t pad = static_cast<std::size_t>(order - 1);
  Context padded;
  Context context;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const EventSeq& seq = corpus[s];
    padded.assign(pad, kBoundary);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (!is_valid_event(seq[i])) {
        throw PreconditionError("sequence " + std::to_string(s) + " position " + std::to_string(i) +
                                ": event ID " + std::to_string(seq[i]) + " out of range");
      }
    }
    padded.insert(padded.end(), seq.begin(), seq.end());
    for (std::size_t i = pad; i < padded.size(); ++i) {
      const EventId event = padded[i];
      for (std::size_t k = 1; k <= static_cast<std::size_t>(order); ++k) {
        context.assign(padded.begin() + static_cast<std::ptrdiff_t>(i - (k - 1)),
                       padded.begin() + static_cast<std::ptrdiff_t>(i));
        ContextCounts& counts = model.tables_[k - 1][context];
        ++counts.total;
        ++counts.next[event];
      }
    }
    model.total_tokens_ += seq.size();
  }
  if (model.total_tokens_ == 0) throw PreconditionError("cannot train on an empty corpus");
  return model;
}

std::uint64_t NgramModel::count(std::span<const EventId> context, EventId event) const {
  if (context.size() >= tables_.size()) return 0;
  const Table& table = tables_[context.size()];
  auto it = table.find(Context(context.begin(), context.end()));
  if (it == table.end()) return 0;
  auto hit = it->second.next.find(event);
  return hit == it->second.next.end() ? 0 : hit->second;
}

std::vector<NgramModel::Component> NgramModel::mixture(std::span<const EventId> history) const {
  const std::size_t width = static_cast<std::size_t>(order_ - 1);
  Context padded(width, kBoundary);
  const std::size_t take = std::min(width, history.size());
  std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
            padded.end() - static_cast<std::ptrdiff_t>(take));

  std::vector<Component> components;
  std::vector<double> weights;
  Context context;
  for (std::size_t k = 1; k <= tables_.size(); ++k) {
    context.assign(padded.end() - static_cast<std::ptrdiff_t>(k - 1), padded.end());
    auto it = tables_[k - 1].find(context);
    if (it == tables_[k - 1].end() || it->second.total == 0) continue;
    components.push_back({0.0, &it->second});
    weights.push_back(lambdas_[k - 1]);
  }
  double observed = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(observed > 0.0)) {
    // Every observed order carries zero weight: share the mass equally.
    std::fill(weights.begin(), weights.end(), 1.0);
    observed = static_cast<double>(weights.size());
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    components[i].weight_per_count =
        (1.0 - epsilon_) * (weights[i] / observed) / static_cast<double>(components[i].counts->total);
  }
  return components;
}

TokenDist NgramModel::next_dist(std::span<const EventId> history) const {
  TokenDist dist;
  dist.fill(epsilon_ / static_cast<double>(kVocabSize));
  for (const Component& c : mixture(history)) {
    for (const auto& [event, n] : c.counts->next) dist[event] += c.weight_per_count * static_cast<double>(n);
  }
  return dist;
}

double NgramModel::prob(std::span<const EventId> history, EventId event) const {
  double p = epsilon_ / static_cast<double>(kVocabSize);
  for (const Component& c : mixture(history)) {
    auto it = c.counts->next.find(event);
    if (it != c.counts->next.end()) p += c.weight_per_count * static_cast<double>(it->second);
  }
  return p;
}

std::vector<std::uint8_t> NgramModel::serialize() const {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.uint<std::uint16_t>(kFormatVersion);
  w.uint<std::uint16_t>(static_cast<std::uint16_t>(order_));
  w.uint<std::uint16_t>(static_cast<std::uint16_t>(kVocabSize));
  w.f64(epsilon_);
  for (double l : lambdas_) w.f64(l);
  w.uint<std::uint64_t>(total_tokens_);

  struct Record {
    const Context* context;
    EventId event;
    std::uint64_t count;
  };
  for (const Table& table : tables_) {
    std::vector<Record> records;
    for (const auto& [context, counts] : table) {
      for (const auto& [event, n] : counts.next) records.push_back({&context, event, n});
    }
    std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
      if (*a.context != *b.context) return *a.context < *b.context;
      return a.event < b.event;
    });
    w.uint<std::uint64_t>(records.size());
    for (const Record& r : records) {
      w.uint<std::uint16_t>(static_cast<std::uint16_t>(r.context->size()));
      for (EventId id : *r.context) w.uint<std::uint16_t>(id);
      w.uint<std::uint16_t>(r.event);
      w.uint<std::uint64_t>(r.count);
    }
  }
  return w.take();
}

bool operator==(const NgramModel& a, const NgramModel& b) {
  return a.order_ == b.order_ && a.epsilon_ == b.epsilon_ && a.lambdas_ == b.lambdas_ &&
         a.total_tokens_ == b.total_tokens_ && a.tables_ == b.tables_;
}

NgramModel NgramModel::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic) {
    throw ModelFormatError(ModelFormatError::Kind::kTruncated, "model file shorter than its magic");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw ModelFormatError(ModelFormatError::Kind::kBadMagic, "not an NGLM model file");
  }
  Reader r(bytes.subspan(sizeof kMagic));
  const auto version = r.uint<std::uint16_t>("version");
  if (version != kFormatVersion) {
    throw ModelFormatError(ModelFormatError::Kind::kVersionMismatch,
                           "model format version " + std::to_string(version) + ", expected " +
                               std::to_string(kFormatVersion));
  }
  NgramModel model;
  model.order_ = r.uint<std::uint16_t>("order");
  const auto vocab_size = r.uint<std::uint16_t>("vocabulary size");
  if (model.order_ < 1) corrupt("order 0");
  if (vocab_size != kVocabSize) corrupt("vocabulary size " + std::to_string(vocab_size));
  model.epsilon_ = r.f64("epsilon");
  for (int o = 0; o < model.order_; ++o) model.lambdas_.push_back(r.f64("interpolation weights"));
  model.total_tokens_ = r.uint<std::uint64_t>("token total");
  try {
    check_options(model.order_, model.lambdas_, model.epsilon_);
  } catch (const PreconditionError& e) {
    corrupt(e.what());
  }

  model.tables_.resize(static_cast<std::size_t>(model.order_));
  Context context;
  for (int k = 1; k <= model.order_; ++k) {
    const auto records = r.uint<std::uint64_t>("record count");
    // Each record takes at least 2 + 2 * (k - 1) + 2 + 8 bytes.
    if (records > r.remaining() / (12 + 2 * static_cast<std::uint64_t>(k - 1))) {
      throw ModelFormatError(ModelFormatError::Kind::kTruncated,
                             "model file truncated: order " + std::to_string(k) + " table declares " +
                                 std::to_string(records) + " records");
    }
    Table& table = model.tables_[static_cast<std::size_t>(k - 1)];
    for (std::uint64_t i = 0; i < records; ++i) {
      const auto length = r.uint<std::uint16_t>("context length");
      if (length != k - 1) corrupt("context length " + std::to_string(length) + " in order " + std::to_string(k));
      context.clear();
      for (int j = 0; j < length; ++j) {
        const auto id = r.uint<std::uint16_t>("context");
        if (!is_valid_event(id)) corrupt("event ID " + std::to_string(id));
        context.push_back(id);
      }
      const auto event = r.uint<std::uint16_t>("event");
      const auto n = r.uint<std::uint64_t>("count");
      if (!is_valid_event(event)) corrupt("event ID " + std::to_string(event));
      if (n == 0) corrupt("zero count record");
      ContextCounts& counts = table[context];
      if (!counts.next.emplace(event, n).second) corrupt("duplicate record");
      counts.total += n;
    }
  }
  if (r.remaining() != 0) corrupt(std::to_string(r.remaining()) + " trailing bytes");
  if (model.tables_[0].size() != 1 || model.tables_[0].begin()->second.total != model.total_tokens_) {
    corrupt("unigram table disagrees with the token total");
  }
  return model;
}

}  // namespace chipscore

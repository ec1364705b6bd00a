#include <bit>
#include <cstring>

#include "kath/error.hpp"
#include "kath/io.hpp"
#include "kath/parser.hpp"

namespace kath {

namespace {

constexpr char kMagic[4] = {'K', 'T', 'H', 'B'};

class Writer {
 public:
  void bytes(std::string_view b) { out_ += b; }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  std::string take() { return std::move(out_); }
  void reserve(std::size_t n) { out_.reserve(n); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::string_view bytes(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::kBadModelFile, "truncated model file");
    auto out = in_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() { return std::string(bytes(u32())); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_component(Writer& w, const LinearModel<float>& m) {
  w.u32(static_cast<std::uint32_t>(m.class_labels.size()));
  for (const auto& label : m.class_labels) w.str(label);
  w.u32(m.trained_epochs);
  w.u64(m.seed);
  w.u64(static_cast<std::uint64_t>(m.dim()));
  for (Eigen::Index c = 0; c < m.classes(); ++c) w.f32(m.bias(c));
  for (Eigen::Index c = 0; c < m.classes(); ++c) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) w.f32(m.weights(c, j));
  }
}

LinearModel<float> read_component(Reader& r, Eigen::Index expected_dim) {
  LinearModel<float> m;
  const std::uint32_t n = r.u32();
  if (n == 0) throw Error(ErrorCode::kBadModelFile, "component without classes");
  for (std::uint32_t i = 0; i < n; ++i) m.class_labels.push_back(r.str());
  m.trained_epochs = r.u32();
  m.seed = r.u64();
  const auto dim = static_cast<Eigen::Index>(r.u64());
  if (dim != expected_dim) {
    throw Error(ErrorCode::kBadModelFile, "component dimension disagrees with hash_bits");
  }
  m.bias.resize(n);
  m.weights.resize(n, dim);
  for (Eigen::Index c = 0; c < n; ++c) m.bias(c) = r.f32();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index j = 0; j < dim; ++j) m.weights(c, j) = r.f32();
  }
  if (!m.all_finite()) throw Error(ErrorCode::kBadModelFile, "non-finite weights");
  return m;
}

}  // namespace

std::string serialize_model(const ParserModel& model) {
  Writer w;
  const auto rows = static_cast<std::size_t>(model.tagger.classes() + model.arc_scorer.classes() +
                                             model.labeler.classes());
  w.reserve(rows * static_cast<std::size_t>(model.tagger.dim()) * 4 + 1024);
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kModelFormatVersion);
  const ParserConfig& c = model.config;
  w.u32(static_cast<std::uint32_t>(c.window));
  w.u32(static_cast<std::uint32_t>(c.hash_bits));
  w.u32(static_cast<std::uint32_t>(c.epochs));
  w.f64(c.lr0);
  w.f64(c.decay);
  w.f64(c.l2);
  w.u64(c.seed);
  w.u32(c.admit == Strictness::kStrict ? 1 : 0);
  write_component(w, model.tagger);
  write_component(w, model.arc_scorer);
  write_component(w, model.labeler);
  return w.take();
}

ParserModel deserialize_model(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorCode::kBadModelFile, "missing KTHB magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kBadModelFile, "unsupported model format version " + std::to_string(version));
  }
  ParserModel model;
  ParserConfig& c = model.config;
  c.window = static_cast<int>(r.u32());
  c.hash_bits = static_cast<int>(r.u32());
  c.epochs = static_cast<int>(r.u32());
  c.lr0 = r.f64();
  c.decay = r.f64();
  c.l2 = r.f64();
  c.seed = r.u64();
  c.admit = r.u32() == 1 ? Strictness::kStrict : Strictness::kLenient;
  try {
    c.check();
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadModelFile, e.what());
  }
  const Eigen::Index dim = Eigen::Index{1} << c.hash_bits;
  model.tagger = read_component(r, dim);
  model.arc_scorer = read_component(r, dim);
  model.labeler = read_component(r, dim);
  if (model.arc_scorer.classes() != 1) {
    throw Error(ErrorCode::kBadModelFile, "arc scorer must have exactly one row");
  }
  if (!r.done()) throw Error(ErrorCode::kBadModelFile, "trailing bytes after model");
  return model;
}

void save_model(const std::string& path, const ParserModel& model) {
  write_file_atomic(path, serialize_model(model));
}

ParserModel load_model(const std::string& path) { return deserialize_model(read_file(path)); }

}  // namespace kath

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "daseg/error.h"
#include "daseg/tagger.h"

namespace daseg {
namespace {

constexpr char kMagic[8] = {'D', 'A', 'S', 'E', 'G', 'T', 'A', 'G'};
constexpr uint32_t kFormatVersion = 1;

class Writer {
 public:
  void U8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Str(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    buf_.append(s);
  }
  void F64s(const std::vector<double>& v) {
    for (double x : v) F64(x);
  }
  std::string& bytes() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  uint8_t U8() {
    Need(1);
    return static_cast<uint8_t>(bytes_[pos_++]);
  }
  uint32_t U32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(U8()) << (8 * i);
    return v;
  }
  uint64_t U64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(U8()) << (8 * i);
    return v;
  }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    const uint32_t n = U32();
    Need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  void F64s(std::vector<double>& v) {
    for (double& x : v) x = F64();
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error("model file is truncated");
  }
  std::string_view bytes_;
  size_t pos_ = 0;
};

uint32_t Crc32(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large payloads in pieces.
  size_t pos = 0;
  while (pos < bytes.size()) {
    const size_t n = std::min<size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos),
                static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<uint32_t>(crc);
}

}  // namespace

std::string SerializeModel(const TaggerModel& model) {
  Writer payload;
  const LabelSet& ls = model.label_set();
  payload.Str(ls.name());
  payload.U32(static_cast<uint32_t>(ls.size()));
  for (const auto& act : ls.acts()) payload.Str(act);
  payload.U32(static_cast<uint32_t>(ls.fallback_index()));
  payload.Str(VariantName(model.variant()));
  payload.U32(static_cast<uint32_t>(model.config.epochs));
  payload.U64(model.config.seed);
  payload.U8(model.config.averaging ? 1 : 0);
  payload.U8(model.config.unit == DecodeUnit::kTurn ? 1 : 0);
  payload.U32(static_cast<uint32_t>(model.metadata.best_epoch));
  payload.F64(model.metadata.dev_macro_f1);
  payload.U64(static_cast<uint64_t>(model.metadata.updates));
  payload.U32(static_cast<uint32_t>(model.labels()));
  payload.F64s(model.start());
  payload.F64s(model.stop());
  payload.F64s(model.transitions());
  payload.U64(model.emissions().size());
  for (const auto& [feature, weights] : model.emissions()) {
    payload.Str(feature);
    payload.F64s(weights);
  }

  Writer out;
  out.bytes().append(kMagic, sizeof(kMagic));
  out.U32(kFormatVersion);
  out.U64(payload.bytes().size());
  out.U32(Crc32(payload.bytes()));
  out.bytes() += payload.bytes();
  return std::move(out.bytes());
}

TaggerModel DeserializeModel(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error("not a tagger model file (bad magic)");
  }
  Reader header(bytes.substr(sizeof(kMagic)));
  const uint32_t version = header.U32();
  if (version != kFormatVersion) {
    throw Error("unsupported model format version " + std::to_string(version) +
                " (expected " + std::to_string(kFormatVersion) + ")");
  }
  const uint64_t size = header.U64();
  const uint32_t crc = header.U32();
  const size_t offset = sizeof(kMagic) + 4 + 8 + 4;
  if (bytes.size() - offset != size) {
    throw Error("model payload size mismatch: header says " +
                std::to_string(size) + " bytes, file has " +
                std::to_string(bytes.size() - offset));
  }
  const std::string_view body = bytes.substr(offset);
  if (Crc32(body) != crc) throw Error("model checksum mismatch");

  Reader in(body);
  const Granularity g = ParseGranularity(in.Str());
  std::vector<std::string> acts(in.U32());
  for (auto& a : acts) a = in.Str();
  const uint32_t fallback = in.U32();
  if (fallback >= acts.size()) throw Error("model fallback act out of range");
  const std::string fallback_act = acts[fallback];
  const Variant variant = ParseVariant(in.Str());
  TaggerModel model(LabelSet(g, std::move(acts), fallback_act), variant);
  model.config.epochs = static_cast<int>(in.U32());
  model.config.seed = in.U64();
  model.config.averaging = in.U8() != 0;
  model.config.unit = in.U8() ? DecodeUnit::kTurn : DecodeUnit::kDialog;
  model.metadata.best_epoch = static_cast<int>(in.U32());
  model.metadata.dev_macro_f1 = in.F64();
  model.metadata.updates = static_cast<int64_t>(in.U64());
  if (in.U32() != static_cast<uint32_t>(model.labels())) {
    throw Error("model joint label count does not match its label set");
  }
  in.F64s(model.start());
  in.F64s(model.stop());
  in.F64s(model.transitions());
  const uint64_t features = in.U64();
  for (uint64_t k = 0; k < features; ++k) {
    std::string name = in.Str();
    in.F64s(model.MutableEmission(name));
  }
  if (!in.done()) throw Error("trailing bytes after model payload");
  return model;
}

void SaveModel(const TaggerModel& model, const std::filesystem::path& path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("I/O error writing " + path.string());
}

TaggerModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return DeserializeModel(buf.str());
}

}  // namespace daseg

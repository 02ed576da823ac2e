#include "xmodal/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "xmodal/hash.hpp"

namespace xmodal {
namespace {

using nlohmann::json;

constexpr char kCheckpointMagic[8] = {'X', 'M', 'C', 'H', 'K', 'P', 'T', '\0'};
constexpr uint32_t kCheckpointVersion = 1;
constexpr char kEmbeddingMagic[8] = {'X', 'M', 'E', 'M', 'B', 'E', 'D', '\0'};
constexpr uint32_t kEmbeddingVersion = 1;

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

uint64_t read_u64(std::istream& is) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

void write_f64_block(std::ostream& os, const std::vector<real>& data) {
  for (real v : data) {
    const double d = static_cast<double>(v);
    os.write(reinterpret_cast<const char*>(&d), 8);
  }
}

void read_f64_block(std::istream& is, std::vector<real>& data) {
  for (real& v : data) {
    double d = 0;
    is.read(reinterpret_cast<char*>(&d), 8);
    v = static_cast<real>(d);
  }
}

}  // namespace

const Tensor& Checkpoint::array(const std::string& name) const {
  for (const auto& [n, t] : arrays)
    if (n == name) return t;
  throw std::runtime_error("checkpoint: missing array '" + name + "' in kind '" + kind + "'");
}

Tensor* Checkpoint::find(const std::string& name) {
  for (auto& [n, t] : arrays)
    if (n == name) return &t;
  return nullptr;
}

void Checkpoint::add(std::string name, Tensor t) {
  arrays.emplace_back(std::move(name), std::move(t));
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");

  json header;
  header["kind"] = kind;
  header["step"] = step;
  header["seed"] = seed;
  header["config"] = config_json;
  header["config_hash"] = config_hash;
  json dir = json::array();
  for (const auto& [name, tensor] : arrays) {
    json entry;
    entry["name"] = name;
    entry["shape"] = tensor.shape;
    dir.push_back(entry);
  }
  header["arrays"] = dir;
  const std::string header_text = header.dump();

  os.write(kCheckpointMagic, 8);
  write_u32(os, kCheckpointVersion);
  write_u64(os, header_text.size());
  os.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& [name, tensor] : arrays) write_f64_block(os, tensor.data);
  if (!os) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open '" + path + "'");

  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
  const uint32_t version = read_u32(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version) +
                             " in '" + path + "'");
  const uint64_t header_len = read_u64(is);
  std::string header_text(header_len, '\0');
  is.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!is) throw std::runtime_error("checkpoint: truncated header in '" + path + "'");

  json header = json::parse(header_text);
  Checkpoint ck;
  ck.kind = header.at("kind").get<std::string>();
  ck.step = header.at("step").get<int64_t>();
  ck.seed = header.at("seed").get<uint64_t>();
  ck.config_json = header.at("config").get<std::string>();
  ck.config_hash = header.at("config_hash").get<std::string>();
  for (const auto& entry : header.at("arrays")) {
    Tensor t(entry.at("shape").get<std::vector<int64_t>>());
    read_f64_block(is, t.data);
    ck.arrays.emplace_back(entry.at("name").get<std::string>(), std::move(t));
  }
  if (!is) throw std::runtime_error("checkpoint: truncated payload in '" + path + "'");
  return ck;
}

void EmbeddingFile::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("embedding file: cannot open '" + path + "' for writing");
  os.write(kEmbeddingMagic, 8);
  write_u32(os, kEmbeddingVersion);
  write_u64(os, static_cast<uint64_t>(d_enc));
  write_u64(os, static_cast<uint64_t>(tokens));
  write_u64(os, frames.size());
  for (const Tensor& frame : frames) {
    if (frame.rank() != 2 || frame.rows() != tokens || frame.cols() != d_enc)
      throw std::runtime_error("embedding file: frame shape " + frame.shape_str() +
                               " does not match header");
    write_f64_block(os, frame.data);
  }
  if (!os) throw std::runtime_error("embedding file: write failed for '" + path + "'");
}

EmbeddingFile EmbeddingFile::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("embedding file: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kEmbeddingMagic, 8) != 0)
    throw std::runtime_error("embedding file: bad magic in '" + path + "'");
  const uint32_t version = read_u32(is);
  if (version != kEmbeddingVersion)
    throw std::runtime_error("embedding file: unsupported version " + std::to_string(version));
  EmbeddingFile f;
  f.d_enc = static_cast<int64_t>(read_u64(is));
  f.tokens = static_cast<int64_t>(read_u64(is));
  const uint64_t n = read_u64(is);
  for (uint64_t i = 0; i < n; ++i) {
    Tensor frame({f.tokens, f.d_enc});
    read_f64_block(is, frame.data);
    f.frames.push_back(std::move(frame));
  }
  if (!is) throw std::runtime_error("embedding file: truncated payload in '" + path + "'");
  return f;
}

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t fnv1a64(const std::string& text) { return fnv1a64(text.data(), text.size()); }

uint64_t hash_tensor(const Tensor& t) {
  uint64_t h = fnv1a64(t.shape.data(), t.shape.size() * sizeof(int64_t));
  return fnv1a64(t.data.data(), t.data.size() * sizeof(real), h);
}

uint64_t hash_params(const std::vector<Param>& params) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const Param& p : params) {
    h = fnv1a64(p.name.data(), p.name.size(), h);
    h = fnv1a64(p.var->value.shape.data(), p.var->value.shape.size() * sizeof(int64_t), h);
    h = fnv1a64(p.var->value.data.data(), p.var->value.data.size() * sizeof(real), h);
  }
  return h;
}

std::string hex64(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

}  // namespace xmodal

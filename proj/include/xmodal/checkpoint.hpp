#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xmodal/tensor.hpp"

namespace xmodal {

// Versioned container shared by every module that persists parameters:
// a JSON header (kind, step, seed, config, named array directory) followed
// by raw little-endian float64 payloads. Save/load round-trips bitwise.
struct Checkpoint {
  std::string kind;
  int64_t step = 0;
  uint64_t seed = 0;
  std::string config_json;  // module-specific config blob
  std::string config_hash;
  std::vector<std::pair<std::string, Tensor>> arrays;  // order preserved on disk

  const Tensor& array(const std::string& name) const;
  Tensor* find(const std::string& name);
  void add(std::string name, Tensor t);

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

// Frozen-encoder exchange format: {magic, version, d_enc, tokens, N} header
// then N*tokens*d_enc little-endian float64 values, frame-major.
struct EmbeddingFile {
  int64_t d_enc = 0;
  int64_t tokens = 0;
  std::vector<Tensor> frames;  // each [tokens x d_enc]

  void save(const std::string& path) const;
  static EmbeddingFile load(const std::string& path);
};

}  // namespace xmodal

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xmodal/graph.hpp"
#include "xmodal/tensor.hpp"

namespace xmodal {

// FNV-1a over raw bytes; used for freeze checks and run fingerprints.
uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL);
uint64_t fnv1a64(const std::string& text);

uint64_t hash_tensor(const Tensor& t);
// Order-sensitive digest over (name, shape, data) of every param.
uint64_t hash_params(const std::vector<Param>& params);

std::string hex64(uint64_t value);

}  // namespace xmodal

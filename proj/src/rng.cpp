#include "xmodal/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xmodal {

uint64_t Rng::uniform_below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::normal() {
  // Draw u1 in (0,1] so log() stays finite.
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void Rng::fill_normal(Tensor& t, double mean, double stddev) {
  for (real& v : t.data) v = static_cast<real>(mean + stddev * normal());
}

uint64_t Rng::derive_seed(uint64_t seed, uint64_t stream) {
  // splitmix64 over (seed ^ rotated stream)
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string Rng::save_state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void Rng::load_state(const std::string& text) {
  std::istringstream is(text);
  is >> engine_;
  if (!is) throw std::runtime_error("Rng::load_state: malformed state string");
}

}  // namespace xmodal

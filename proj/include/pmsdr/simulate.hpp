#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "pmsdr/numlin.hpp"

namespace pmsdr {

/// Standard normal draws from a 64-bit Mersenne Twister seeded with `seed`.
/// Uniforms take the top 53 bits of each engine output; normals come in pairs
/// from the Box-Muller transform. Unlike std::normal_distribution the stream
/// is identical on every standard library.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double operator()();

 private:
  double uniform();  // in (0, 1)

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

enum class SimModel {
  Model12,   // y = x1 / (0.5 + (x2 + 1)^2) + 0.2 e
  Model14,   // y = 0.5 sqrt(x1^2 + x2^2) log(x1^2 + x2^2) + 0.2 e
  Binary12,  // sign of the Model12 response
};

std::optional<SimModel> parse_model(std::string_view name);

struct SimData {
  Matrix x;      // n x p, iid N(0,1), drawn row by row
  Vector y;
  Vector noise;  // the e_i, drawn after x
};

/// Requires n >= 10 and p >= 2.
SimData simulate(SimModel model, std::size_t n, std::size_t p, std::uint64_t seed);

}  // namespace pmsdr

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pmsdr/numlin.hpp"

namespace pmsdr::testing {

inline Matrix random_matrix(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix m(n, p);
  for (double& v : m.data()) v = nd(rng);
  return m;
}

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
  return random_matrix(n, 1, seed).col(0);
}

inline Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  Matrix a = random_matrix(n, n, seed);
  return a + a.transpose();
}

// Columns of v[:, 0..d) made orthonormal by modified Gram-Schmidt.
inline Matrix orthonormal_columns(const Matrix& v, std::size_t d) {
  Matrix q(v.rows(), d);
  for (std::size_t j = 0; j < d; ++j) {
    Vector c = v.col(j);
    for (std::size_t k = 0; k < j; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < v.rows(); ++i) s += q(i, k) * c[i];
      for (std::size_t i = 0; i < v.rows(); ++i) c[i] -= s * q(i, k);
    }
    const double nrm = std::sqrt(dot(c, c));
    for (std::size_t i = 0; i < v.rows(); ++i) q(i, j) = c[i] / nrm;
  }
  return q;
}

// Frobenius norm of P_A - P_B for the spans of the first d columns of a and b.
inline double projection_distance(const Matrix& a, const Matrix& b, std::size_t d) {
  const Matrix qa = orthonormal_columns(a, d);
  const Matrix qb = orthonormal_columns(b, d);
  const Matrix diff = qa * qa.transpose() - qb * qb.transpose();
  double s = 0.0;
  for (double v : diff.data()) s += v * v;
  return std::sqrt(s);
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pmsdr::testing

// Seeded random instances with a portable stream: mt19937_64 drives explicit
// uniform and Box-Muller normal transforms, so the same seed reproduces the
// same matrices on any platform. Complex normals are drawn real part first,
// matrices row by row.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qbound/numlin.hpp"

namespace qbound {

class rng {
 public:
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53 bits.
  double uniform();
  // Standard normal via Box-Muller.
  double normal();
  // Independent standard normal real and imaginary parts.
  cx complex_normal();

  cmat ginibre(Eigen::Index rows, Eigen::Index cols);
  // Haar unitary: QR of a Ginibre matrix with the R diagonal phased positive.
  cmat unitary(Eigen::Index dim);
  // Haar isometry, rows >= cols.
  cmat isometry(Eigen::Index rows, Eigen::Index cols);
  // G G^dag normalized to unit trace.
  cmat density(Eigen::Index dim);
  // Normalized complex normal vector.
  cvec pure_state(Eigen::Index dim);
  // Uniform point on the probability simplex via normalized -log(uniform).
  std::vector<double> simplex(std::size_t count);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qbound

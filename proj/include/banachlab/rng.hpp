#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string_view>

namespace banachlab {

// Deterministic counter-splittable random source. All randomness in the
// library flows through explicit Rng values seeded from user-supplied
// integers, so results are reproducible and independent of thread count:
// parallel work derives child generators by index instead of sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Child generator for sub-task `index`; the stream is independent of how
  // many siblings exist or in which order they are drawn.
  Rng child(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  double gaussian();                      // standard normal, Box-Muller
  int uniform_int(int lo, int hi);        // inclusive bounds

  Eigen::VectorXd gaussian_vector(int n);
  Eigen::VectorXcd complex_gaussian_vector(int n);
  Eigen::MatrixXcd complex_gaussian_matrix(int rows, int cols);

 private:
  std::uint64_t state_;
  std::uint64_t stream_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over raw bytes; used to derive deterministic perturbation
// directions from canonical vectors.
std::uint64_t hash_bytes(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

}  // namespace banachlab

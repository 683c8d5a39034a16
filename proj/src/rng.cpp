#include "banachlab/rng.hpp"

#include <cmath>
#include <cstring>

namespace banachlab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& x) {
  x += kGolden;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  state_ = splitmix64(s);
  stream_ = splitmix64(s) | 1ULL;  // odd increment, PCG-style stream selection
}

Rng Rng::child(std::uint64_t index) const {
  std::uint64_t mixed = state_;
  mixed = hash_combine(mixed, stream_);
  mixed = hash_combine(mixed, index + 1);
  return Rng(mixed);
}

std::uint64_t Rng::next_u64() {
  // xorshift with additive stream; period and quality are ample for
  // Monte Carlo at desk scale and the output is platform independent.
  state_ += stream_;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 6.283185307179586476925286766559;
  spare_ = mag * std::sin(two_pi * u2);
  have_spare_ = true;
  return mag * std::cos(two_pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

Eigen::VectorXd Rng::gaussian_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gaussian();
  return v;
}

Eigen::VectorXcd Rng::complex_gaussian_vector(int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gaussian();
    const double im = gaussian();
    v[i] = std::complex<double>(re, im);
  }
  return v;
}

Eigen::MatrixXcd Rng::complex_gaussian_matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = gaussian();
      const double im = gaussian();
      m(i, j) = std::complex<double>(re, im);
    }
  return m;
}

std::uint64_t hash_bytes(const void* data, std::size_t n, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  std::uint64_t buf[2] = {a, b};
  return hash_bytes(buf, sizeof(buf));
}

}  // namespace banachlab

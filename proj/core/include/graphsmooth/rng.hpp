#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Core>

namespace graphsmooth {

/// Deterministic random source.
///
/// Every distribution is derived from raw mt19937_64 output, whose sequence
/// the standard fixes exactly.  std::normal_distribution and friends are
/// deliberately avoided because their algorithms are implementation-defined;
/// with this class, equal seeds give bitwise-equal streams on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; never zero, so it is safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.  Values come in pairs; the second of
  /// each pair is cached, so a single stream yields a stable sequence.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Fair coin: true with probability 1/2.
  bool coin() { return uniform() < 0.5; }

  /// Matrix of iid standard normals, filled row by row.
  Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        m(i, j) = gaussian();
      }
    }
    return m;
  }

  /// Vector of iid standard normals.
  Eigen::VectorXd gaussian_vector(Eigen::Index size) {
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      v(i) = gaussian();
    }
    return v;
  }

  /// Uniform integer in [0, bound); bound must be positive.  Uses rejection
  /// to stay unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 gen_;
  double spare_{0.0};
  bool have_spare_{false};
};

}  // namespace graphsmooth

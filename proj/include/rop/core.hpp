#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rop {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

enum class ErrorKind {
  dimension,
  invalid_argument,
  nonexistent,
  synthesis_failed,
  invalid_factors,
  not_kronecker,
  ambiguous_structure,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::nonexistent: return "nonexistent";
    case ErrorKind::synthesis_failed: return "synthesis-failed";
    case ErrorKind::invalid_factors: return "invalid-factors";
    case ErrorKind::not_kronecker: return "not-kronecker";
    case ErrorKind::ambiguous_structure: return "ambiguous-structure";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thresholds shared across modules. Ratio tolerances are relative to the
/// largest singular value of the matrix under test.
namespace tol {
inline constexpr double rank_one_ratio = 1e-8;   // sigma2 / sigma1 for "rank one"
inline constexpr double none_found = 1e-6;       // product-vector search: bounded away from 0
inline constexpr double found = 1e-8;            // product-vector search: certified hit
inline constexpr double not_kronecker = 1e-6;    // realigned sigma2 / sigma1
inline constexpr double recover_residual = 1e-8;
inline constexpr double nonsingular_ratio = 1e-10;
}  // namespace tol

/// The tuple (n_1, ..., n_k) of local dimensions, each at least 2.
class DimsProfile {
 public:
  DimsProfile() = default;

  explicit DimsProfile(std::vector<Index> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorKind::invalid_argument, "dims profile needs k >= 1");
    for (Index n : factors_) {
      if (n < 2) throw Error(ErrorKind::invalid_argument, "every local dimension must be >= 2");
    }
  }

  Index k() const { return static_cast<Index>(factors_.size()); }
  Index n(Index i) const { return factors_.at(static_cast<std::size_t>(i)); }
  const std::vector<Index>& factors() const { return factors_; }

  Index m() const {
    Index prod = 1;
    for (Index n : factors_) prod *= n;
    return prod;
  }

  friend bool operator==(const DimsProfile&, const DimsProfile&) = default;

 private:
  std::vector<Index> factors_;
};

inline Index product(const std::vector<Index>& dims) {
  Index prod = 1;
  for (Index d : dims) prod *= d;
  return prod;
}

// Random helpers. All randomness flows from explicitly seeded generators.

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline ComplexMatrix random_matrix(Index rows, Index cols, Rng& rng) {
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = random_complex(rng);
  return a;
}

inline ComplexVector random_vector(Index n, Rng& rng) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = random_complex(rng);
  return v;
}

inline ComplexVector random_unit_vector(Index n, Rng& rng) {
  ComplexVector v = random_vector(n, rng);
  return v / v.norm();
}

inline ComplexVector basis_vector(Index n, Index i) {
  ComplexVector e = ComplexVector::Zero(n);
  e(i) = 1.0;
  return e;
}

inline bool all_finite(const ComplexMatrix& a) {
  return a.array().real().allFinite() && a.array().imag().allFinite();
}

}  // namespace rop

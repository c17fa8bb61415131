#pragma once

// Dense kernels shared by every module: weighted Gram matrices, a
// positive-definite factorization with solve and log-determinant, and
// Kronecker products.
//
// Kronecker convention: the FIRST factor's index varies fastest,
//   (A (x) B)(i1 + i2*n1, j1 + j2*d1) = A(i1, j1) * B(i2, j2)   (0-based),
// which is the transpose of the usual block layout (kron_std(B, A) here
// equals kron(A, B)). All tensor code relies on this ordering.

#include <Eigen/Dense>

#include <cstddef>
#include <span>

namespace johnell {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Constraint matrix A of the polytope {x : -1 <= Ax <= 1}. Rows are a_i^T.
class PolytopeMatrix {
 public:
  // Throws DimensionError unless n >= d >= 1, InputError on non-finite entries.
  explicit PolytopeMatrix(Matrix entries);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  const Matrix& entries() const noexcept { return entries_; }
  auto row(std::size_t i) const { return entries_.row(static_cast<Eigen::Index>(i)); }

 private:
  Matrix entries_;
};

// Nonnegative, finite weights (one per constraint row).
class WeightVector {
 public:
  WeightVector() = default;
  // Throws InputError on negative or non-finite entries.
  explicit WeightVector(Vector values);

  static WeightVector constant(std::size_t n, double value);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const Vector& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }
  double sum() const;
  double min() const { return values_.minCoeff(); }
  std::span<const double> view() const noexcept {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

 private:
  Vector values_;
};

// Symmetric d x d matrix A^T diag(w) A.
struct GramMatrix {
  Matrix entries;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

// A^T diag(w) A = sum_i w_i a_i a_i^T, symmetrized exactly.
GramMatrix gram(const PolytopeMatrix& a, const WeightVector& w);

// Pivot tolerance relative to the largest diagonal entry.
inline constexpr double kPivotTolerance = 1e-12;

// Factorization certifying M > 0. Two backends:
//   cholesky:  P M P^T = L L^T with diagonal pivoting,
//   qr:        sqrt(W) A P = Q R with column pivoting, so M = P R^T R P^T.
// Both expose the same solve/log-det/whitening surface.
class PDFactor {
 public:
  enum class Method { cholesky, qr };

  Method method() const noexcept { return method_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(factor_.rows()); }

  // x with M x = b.
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

  // log det M.
  double logdet() const;

  // Returns Y with Y^T Y = B^T M^{-1} B, i.e. column norms of Y squared are
  // the quadratic forms b_j^T M^{-1} b_j.
  Matrix whiten(const Matrix& b) const;

  // Maps u to x with x^T M x = |u|^2.
  Vector sphere_to_ellipsoid(const Vector& u) const;

 private:
  friend PDFactor pd_factorize(const GramMatrix& m);
  friend PDFactor pd_factorize_qr(const PolytopeMatrix& a, const WeightVector& w);

  PDFactor(Method method, Matrix factor, Eigen::VectorXi perm)
      : method_(method), factor_(std::move(factor)), perm_(std::move(perm)) {}

  Method method_;
  // Lower-triangular L (cholesky) or upper-triangular R (qr).
  Matrix factor_;
  // Pivoted position k holds original index perm_(k).
  Eigen::VectorXi perm_;
};

// Pivoted Cholesky. Throws InputError if M is not symmetric, RankDeficient
// when a pivot drops to <= kPivotTolerance * max diagonal.
PDFactor pd_factorize(const GramMatrix& m);

// Column-pivoted QR of sqrt(diag(w)) A; avoids squaring the condition number.
PDFactor pd_factorize_qr(const PolytopeMatrix& a, const WeightVector& w);

inline Vector pd_solve(const PDFactor& f, const Vector& b) { return f.solve(b); }
inline double pd_logdet(const PDFactor& f) { return f.logdet(); }

// Row limit applied to every materialized Kronecker product.
inline constexpr std::size_t kDefaultKronRowLimit = std::size_t{1} << 20;

// Kronecker product, first-factor-fastest. Throws SizeError when the row
// count would exceed row_limit.
Matrix kron(const Matrix& a, const Matrix& b, std::size_t row_limit = kDefaultKronRowLimit);
PolytopeMatrix kron(const PolytopeMatrix& a, const PolytopeMatrix& b,
                    std::size_t row_limit = kDefaultKronRowLimit);
Vector kron(const Vector& a, const Vector& b, std::size_t row_limit = kDefaultKronRowLimit);

// Flat index of (i1, i2) in a first-factor-fastest product with n1 rows in
// the first factor.
constexpr std::size_t kron_index(std::size_t i1, std::size_t i2, std::size_t n1) noexcept {
  return i1 + i2 * n1;
}

}  // namespace johnell

#include "johnell/matcore.hpp"

#include "johnell/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace johnell {

PolytopeMatrix::PolytopeMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.cols() < 1 || entries_.rows() < entries_.cols()) {
    throw DimensionError("polytope matrix must satisfy n >= d >= 1, got " +
                         std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw InputError("polytope matrix has non-finite entries");
  }
}

WeightVector::WeightVector(Vector values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_(i);
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("weight " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

WeightVector WeightVector::constant(std::size_t n, double value) {
  return WeightVector(Vector::Constant(static_cast<Eigen::Index>(n), value));
}

double WeightVector::sum() const {
  // Neumaier summation; n can be large and sums feed certificates.
  double s = 0.0, c = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_(i);
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

GramMatrix gram(const PolytopeMatrix& a, const WeightVector& w) {
  if (w.size() != a.rows()) {
    throw InputError("weight length " + std::to_string(w.size()) + " does not match " +
                     std::to_string(a.rows()) + " rows");
  }
  const Matrix& m = a.entries();
  Matrix g = m.transpose() * w.values().asDiagonal() * m;
  // Exact symmetry; the product above is symmetric only up to rounding.
  g = 0.5 * (g + g.transpose()).eval();
  return GramMatrix{std::move(g)};
}

PDFactor pd_factorize(const GramMatrix& gm) {
  const Matrix& m = gm.entries;
  const Eigen::Index d = m.rows();
  if (m.cols() != d || d == 0) {
    throw InputError("Gram matrix must be square and non-empty");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if (!m.allFinite()) {
    throw NumericalError("Gram matrix has non-finite entries");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InputError("Gram matrix is not symmetric");
  }

  Matrix work = m;
  Eigen::VectorXi perm(d);
  for (Eigen::Index i = 0; i < d; ++i) perm(i) = static_cast<int>(i);

  const double max_diag = m.diagonal().maxCoeff();
  const double tol = kPivotTolerance * std::max(max_diag, 0.0);

  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::Index p = k;
    work.diagonal().tail(d - k).maxCoeff(&p);
    p += k;
    if (!(work(p, p) > tol) || max_diag <= 0.0) {
      throw RankDeficient("Gram matrix is not positive definite (pivot " + std::to_string(k) +
                          " of " + std::to_string(d) + ")");
    }
    if (p != k) {
      work.row(k).swap(work.row(p));
      work.col(k).swap(work.col(p));
      std::swap(perm(k), perm(p));
    }
    const double pivot = std::sqrt(work(k, k));
    work(k, k) = pivot;
    const Eigen::Index rest = d - k - 1;
    work.col(k).tail(rest) /= pivot;
    // Full symmetric trailing update keeps later row/column swaps valid.
    const Vector l = work.col(k).tail(rest);
    work.bottomRightCorner(rest, rest).noalias() -= l * l.transpose();
  }
  Matrix lower = work.triangularView<Eigen::Lower>();
  return PDFactor(PDFactor::Method::cholesky, std::move(lower), std::move(perm));
}

PDFactor pd_factorize_qr(const PolytopeMatrix& a, const WeightVector& w) {
  if (w.size() != a.rows()) {
    throw InputError("weight length does not match row count");
  }
  const Matrix scaled = w.values().cwiseSqrt().asDiagonal() * a.entries();
  Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
  const Eigen::Index d = scaled.cols();
  Matrix r = qr.matrixR().topLeftCorner(d, d).triangularView<Eigen::Upper>();

  // R^T R is the pivoted Gram, so R(k,k)^2 plays the Cholesky pivot's role.
  const double max_diag = r.diagonal().cwiseAbs2().maxCoeff();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(r(k, k) * r(k, k) > kPivotTolerance * max_diag) || max_diag <= 0.0) {
      throw RankDeficient("weighted matrix is rank deficient (QR pivot " + std::to_string(k) +
                          ")");
    }
  }
  Eigen::VectorXi perm = qr.colsPermutation().indices();
  return PDFactor(PDFactor::Method::qr, std::move(r), std::move(perm));
}

// Both backends are M = P^T T^T T P with T upper triangular (T = L^T for
// Cholesky), where (P x)(k) = x(perm(k)).

Vector PDFactor::solve(const Vector& b) const {
  return solve(Matrix(b)).col(0);
}

Matrix PDFactor::solve(const Matrix& b) const {
  if (b.rows() != factor_.rows()) {
    throw InputError("right-hand side has wrong dimension");
  }
  const Matrix y = whiten(b);
  Matrix z;
  if (method_ == Method::cholesky) {
    z = factor_.transpose().triangularView<Eigen::Upper>().solve(y);
  } else {
    z = factor_.triangularView<Eigen::Upper>().solve(y);
  }
  Matrix x(b.rows(), b.cols());
  for (Eigen::Index k = 0; k < z.rows(); ++k) x.row(perm_(k)) = z.row(k);
  return x;
}

double PDFactor::logdet() const {
  return 2.0 * factor_.diagonal().cwiseAbs().array().log().sum();
}

Matrix PDFactor::whiten(const Matrix& b) const {
  if (b.rows() != factor_.rows()) {
    throw InputError("whiten operand has wrong dimension");
  }
  Matrix pb(b.rows(), b.cols());
  for (Eigen::Index k = 0; k < b.rows(); ++k) pb.row(k) = b.row(perm_(k));
  if (method_ == Method::cholesky) {
    factor_.triangularView<Eigen::Lower>().solveInPlace(pb);
  } else {
    factor_.transpose().triangularView<Eigen::Lower>().solveInPlace(pb);
  }
  return pb;
}

Vector PDFactor::sphere_to_ellipsoid(const Vector& u) const {
  if (u.size() != factor_.rows()) {
    throw InputError("direction has wrong dimension");
  }
  // Solve T P x = u.
  Vector z;
  if (method_ == Method::cholesky) {
    z = factor_.transpose().triangularView<Eigen::Upper>().solve(u);
  } else {
    z = factor_.triangularView<Eigen::Upper>().solve(u);
  }
  Vector x(u.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) x(perm_(k)) = z(k);
  return x;
}

namespace {

std::size_t checked_product(std::size_t a, std::size_t b, std::size_t limit) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw SizeError("Kronecker dimension overflows");
  }
  const std::size_t p = a * b;
  if (p > limit) {
    throw SizeError("Kronecker product has " + std::to_string(p) + " rows, limit is " +
                    std::to_string(limit));
  }
  return p;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b, std::size_t row_limit) {
  const auto n1 = static_cast<std::size_t>(a.rows());
  const auto n2 = static_cast<std::size_t>(b.rows());
  const auto d1 = static_cast<std::size_t>(a.cols());
  const auto d2 = static_cast<std::size_t>(b.cols());
  const std::size_t rows = checked_product(n1, n2, row_limit);
  const std::size_t cols = checked_product(d1, d2, std::numeric_limits<std::size_t>::max());

  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t j2 = 0; j2 < d2; ++j2) {
    for (std::size_t j1 = 0; j1 < d1; ++j1) {
      const auto col = static_cast<Eigen::Index>(kron_index(j1, j2, d1));
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const double bv = b(static_cast<Eigen::Index>(i2), static_cast<Eigen::Index>(j2));
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
          out(static_cast<Eigen::Index>(kron_index(i1, i2, n1)), col) =
              a(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(j1)) * bv;
        }
      }
    }
  }
  return out;
}

PolytopeMatrix kron(const PolytopeMatrix& a, const PolytopeMatrix& b, std::size_t row_limit) {
  return PolytopeMatrix(kron(a.entries(), b.entries(), row_limit));
}

Vector kron(const Vector& a, const Vector& b, std::size_t row_limit) {
  return kron(Matrix(a), Matrix(b), row_limit).col(0);
}

}  // namespace johnell

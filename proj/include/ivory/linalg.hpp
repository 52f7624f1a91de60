#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

#include "ivory/errors.hpp"
#include "ivory/numeric_policy.hpp"

namespace ivory {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A fixed nonsingular symmetric bilinear form <.,.> on V, stored by its
/// Gram matrix H. The signature (r, s) counts positive/negative inertia.
class InnerProduct {
 public:
  explicit InnerProduct(Matrix gram,
                        const NumericPolicy& policy = default_policy())
      : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols())
      throw DimensionMismatch("inner product Gram matrix must be square");
    if ((gram_ - gram_.transpose()).norm() != 0.0) {
      // Symmetrize only exact-roundoff asymmetry; anything bigger is a bug
      // in the caller's data.
      const double rel =
          (gram_ - gram_.transpose()).norm() / std::max(1.0, gram_.norm());
      if (rel > 1e-14)
        throw DegenerateInput("inner product Gram matrix is not symmetric");
      gram_ = ((gram_ + gram_.transpose()) / 2.0).eval();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram_);
    const Vector evs = es.eigenvalues();
    const double scale = evs.cwiseAbs().maxCoeff();
    positive_ = negative_ = 0;
    for (Eigen::Index i = 0; i < evs.size(); ++i) {
      if (std::abs(evs[i]) <= policy.rank_threshold * scale)
        throw DegenerateInput("inner product Gram matrix is singular");
      (evs[i] > 0 ? positive_ : negative_)++;
    }
    inverse_ = gram_.inverse();
  }

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inverse() const { return inverse_; }
  std::pair<int, int> signature() const { return {positive_, negative_}; }

 private:
  Matrix gram_;
  Matrix inverse_;
  int positive_ = 0;
  int negative_ = 0;
};

inline double inner(const InnerProduct& ip, const Vector& x, const Vector& y) {
  if (x.size() != ip.dim() || y.size() != ip.dim())
    throw DimensionMismatch("inner: vector length does not match form");
  return x.dot(ip.gram() * y);
}

/// Adjoint with respect to the indefinite form: L* = H^-1 L^T H.
inline Matrix adjoint(const InnerProduct& ip, const Matrix& L) {
  if (L.rows() != ip.dim() || L.cols() != ip.dim())
    throw DimensionMismatch("adjoint: matrix size does not match form");
  return ip.gram_inverse() * L.transpose() * ip.gram();
}

/// True iff HL is symmetric up to a relative tolerance.
inline bool is_self_adjoint(const InnerProduct& ip, const Matrix& L,
                            double tol) {
  const Matrix HL = ip.gram() * L;
  const double scale = HL.norm();
  if (scale == 0.0) return true;
  return (HL - HL.transpose()).norm() <= tol * scale;
}

/// A homogeneous coordinate vector, nonzero up to scale. Normalized so the
/// largest-magnitude coordinate is 1 in absolute value, sign preserved.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(Vector coords,
                           const NumericPolicy& policy = default_policy())
      : coords_(std::move(coords)) {
    const double m = coords_.cwiseAbs().maxCoeff();
    if (m < policy.normalization_floor)
      throw DegenerateInput("projective point has no nonzero coordinate");
    coords_ /= m;
  }

  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

  /// Equality up to a nonzero real scale.
  bool same_point(const ProjectivePoint& other, double tol = 1e-9) const {
    if (other.dim() != dim()) return false;
    const Vector& a = coords_;
    const Vector& b = other.coords_;
    const double num = a.dot(b);
    const double den = a.norm() * b.norm();
    return std::abs(std::abs(num) - den) <= tol * den;
  }

 private:
  Vector coords_;
};

/// Projective metric delta(x,y) = <x,y> / sqrt(|<x,x><y,y>|).
inline double delta_metric(const InnerProduct& ip, const ProjectivePoint& x,
                           const ProjectivePoint& y,
                           const NumericPolicy& policy = default_policy()) {
  const Vector& xv = x.coords();
  const Vector& yv = y.coords();
  const double hn = ip.gram().norm();
  const double xx = inner(ip, xv, xv);
  const double yy = inner(ip, yv, yv);
  if (std::abs(xx) <= policy.isotropic_tol * xv.squaredNorm() * hn ||
      std::abs(yy) <= policy.isotropic_tol * yv.squaredNorm() * hn)
    throw IsotropicPoint("delta_metric: point has vanishing self-product");
  return inner(ip, xv, yv) / std::sqrt(std::abs(xx * yy));
}

/// An idempotent operator with an explicit Im/Ker splitting. The stored map
/// acts as the identity on the column span of image_basis and as zero on the
/// span of kernel_basis.
struct Projection {
  Matrix map;
  Matrix image_basis;   // dim x rank
  Matrix kernel_basis;  // dim x (dim - rank)

  int dim() const { return static_cast<int>(map.rows()); }
  int rank() const { return static_cast<int>(image_basis.cols()); }
  bool is_identity(double tol = 1e-12) const {
    return (map - Matrix::Identity(dim(), dim())).norm() <= tol * dim();
  }
};

inline Projection make_projection(const Matrix& image_basis,
                                  const Matrix& kernel_basis,
                                  const NumericPolicy& policy =
                                      default_policy()) {
  const Eigen::Index n = image_basis.rows() > 0 ? image_basis.rows()
                                                : kernel_basis.rows();
  if (image_basis.cols() + kernel_basis.cols() != n)
    throw DegenerateBasis("make_projection: bases do not span the space");
  Matrix full(n, n);
  if (image_basis.cols() > 0) full.leftCols(image_basis.cols()) = image_basis;
  if (kernel_basis.cols() > 0)
    full.rightCols(kernel_basis.cols()) = kernel_basis;
  Eigen::JacobiSVD<Matrix> svd(full);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > policy.basis_condition_bound)
    throw DegenerateBasis("make_projection: concatenated basis is singular");
  Matrix selector = Matrix::Zero(n, n);
  selector.topLeftCorner(image_basis.cols(), image_basis.cols())
      .setIdentity();
  Projection p;
  p.map = full * selector * full.inverse();
  p.image_basis = image_basis;
  p.kernel_basis = kernel_basis;
  return p;
}

inline Projection identity_projection(int n) {
  Projection p;
  p.map = Matrix::Identity(n, n);
  p.image_basis = Matrix::Identity(n, n);
  p.kernel_basis = Matrix(n, 0);
  return p;
}

/// Coordinate matrix of L restricted to an invariant subspace, in the given
/// basis. Throws NotInvariant if L*basis leaves the span.
inline Matrix restrict_to(const Matrix& L, const Matrix& basis,
                          const NumericPolicy& policy = default_policy()) {
  if (basis.cols() == 0) return Matrix(0, 0);
  const Matrix image = L * basis;
  // Solve basis * R = L * basis in the least-squares sense.
  Eigen::ColPivHouseholderQR<Matrix> qr(basis);
  const Matrix R = qr.solve(image);
  const double scale = std::max(image.norm(), L.norm() * basis.norm());
  const double residual = (basis * R - image).norm();
  if (scale > 0 && residual > policy.invariant_subspace_tol * scale)
    throw NotInvariant("restrict_to: subspace is not invariant under the map");
  return R;
}

/// Principal square root of the restriction of M to span(basis). The
/// restriction must be real-diagonalizable with strictly positive spectrum;
/// anything else raises SqrtDomain.
inline Matrix sqrt_on_subspace(const Matrix& M, const Matrix& basis,
                               const NumericPolicy& policy =
                                   default_policy()) {
  const Matrix R = restrict_to(M, basis, policy);
  if (R.rows() == 0) return R;
  Eigen::EigenSolver<Matrix> es(R);
  const auto evs = es.eigenvalues();
  const double scale = std::max(1.0, evs.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < evs.size(); ++i) {
    if (std::abs(evs[i].imag()) > policy.sqrt_spectrum_tol * scale)
      throw SqrtDomain("sqrt_on_subspace: nonreal eigenvalue");
    if (evs[i].real() <= policy.sqrt_spectrum_tol * scale)
      throw SqrtDomain("sqrt_on_subspace: nonpositive eigenvalue");
  }
  const Matrix V = es.eigenvectors().real();
  Eigen::JacobiSVD<Matrix> svd(V);
  if (svd.singularValues().minCoeff() <=
      policy.rank_threshold * svd.singularValues().maxCoeff())
    throw SqrtDomain("sqrt_on_subspace: defective eigenstructure");
  Vector roots(evs.size());
  for (Eigen::Index i = 0; i < evs.size(); ++i)
    roots[i] = std::sqrt(evs[i].real());
  const Matrix S = V * roots.asDiagonal() * V.inverse();
  if ((S * S - R).norm() > policy.sqrt_residual_tol * std::max(1.0, R.norm()))
    throw SqrtDomain("sqrt_on_subspace: residual exceeds tolerance");
  return S;
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix: inverts on Im T and
/// vanishes on the coordinate-orthogonal complement.
inline Matrix pseudo_inverse(const Matrix& T,
                             const NumericPolicy& policy = default_policy()) {
  const double scale = std::max(1.0, T.norm());
  if ((T - T.transpose()).norm() > policy.self_adjoint_tol * scale)
    throw DegenerateInput("pseudo_inverse: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es((T + T.transpose()) / 2.0);
  const Vector evs = es.eigenvalues();
  const double cutoff = policy.rank_threshold * evs.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(evs.size());
  for (Eigen::Index i = 0; i < evs.size(); ++i)
    if (std::abs(evs[i]) > cutoff) inv[i] = 1.0 / evs[i];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

/// Assemble the operator acting as `on_image` (in image-basis coordinates)
/// on Im p and as the identity on Ker p.
inline Matrix extend_by_identity(const Projection& p, const Matrix& on_image) {
  const int n = p.dim();
  Matrix full(n, n);
  Matrix block = Matrix::Identity(n, n);
  if (p.rank() > 0) {
    full.leftCols(p.rank()) = p.image_basis;
    block.topLeftCorner(p.rank(), p.rank()) = on_image;
  }
  if (p.rank() < n) full.rightCols(n - p.rank()) = p.kernel_basis;
  return full * block * full.inverse();
}

}  // namespace ivory

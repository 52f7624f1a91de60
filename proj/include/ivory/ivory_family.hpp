#pragma once

#include <utility>
#include <vector>

#include "ivory/pencil.hpp"

namespace ivory {

/// The smooth family l_lambda connecting members of a projection pencil:
/// l_lambda^2 = id - lambda g0 on Im p, identity on Ker p. Built from a
/// regular p-quadric whose restriction to Im p has real diagonalizable
/// spectrum strictly below 1.
class IvoryFamily {
 public:
  IvoryFamily(InnerProduct ip, Projection p, const Quadric& g0,
              const NumericPolicy& policy = default_policy())
      : ip_(std::move(ip)), p_(std::move(p)), policy_(policy) {
    if (!g0.regular())
      throw SingularQuadric("ivory family: base quadric is singular");
    if (!is_p_quadric(g0, p_, 1e-8))
      throw NotPQuadric("ivory family: base is not a p-quadric");
    g0_op_ = p_quadric_representative(g0, p_);
    decompose();
    pencil_.emplace(ip_, p_, Quadric(ip_, g0_op_, policy_), policy_);
    l_ = l_lambda(1.0);
  }

  const InnerProduct& ip() const { return ip_; }
  const Projection& projection() const { return p_; }
  const Matrix& base_op() const { return g0_op_; }
  const Matrix& connecting_map() const { return l_; }
  const ProjectionPencil& pencil() const { return *pencil_; }
  std::pair<double, double> domain() const { return domain_; }

  /// Distance from {0, 1} to the domain boundary (the construction's margin).
  double domain_margin() const {
    return std::min(0.0 - domain_.first, domain_.second - 1.0);
  }

  bool in_domain(double lambda) const {
    return lambda > domain_.first && lambda < domain_.second;
  }

  /// l_lambda = principal sqrt of id - lambda g0 on Im p, identity on Ker p.
  /// The closed endpoint of the domain is admitted (the root degenerates to
  /// zero there); anything past it is OutOfDomain.
  Matrix l_lambda(double lambda) const {
    if (p_.rank() == 0) return Matrix::Identity(ip_.dim(), ip_.dim());
    Vector roots(mu_.size());
    for (Eigen::Index i = 0; i < mu_.size(); ++i) {
      const double v = 1.0 - lambda * mu_[i];
      if (v < -1e-12 * (1.0 + std::abs(lambda * mu_[i])))
        throw OutOfDomain("l_lambda: parameter outside the square-root domain");
      roots[i] = std::sqrt(std::max(v, 0.0));
    }
    const Matrix S = vecs_ * roots.asDiagonal() * vecs_inv_;
    return extend_by_identity(p_, S);
  }

  /// l'_lambda = l_lambda p + (id - p); coincides with l_lambda here because
  /// the extension is already the identity on Ker p.
  Matrix l_prime(double lambda) const {
    const Matrix L = l_lambda(lambda);
    const Matrix I = Matrix::Identity(ip_.dim(), ip_.dim());
    return L * p_.map + (I - p_.map);
  }

  Matrix g_lambda_operator(double lambda) const {
    return pencil_->member_operator(lambda);
  }

  Quadric g_lambda(double lambda) const {
    return Quadric(ip_, g_lambda_operator(lambda), policy_);
  }

  bool on_base(const ProjectivePoint& x, double tol = 1e-8) const {
    return contains(pencil_->base(), x, tol);
  }

  /// |delta(x, l'(y)) - delta(l'(x), y)| for x, y on the base quadric.
  double verify_ivory_delta(double lambda, const ProjectivePoint& x,
                            const ProjectivePoint& y) const {
    if (!on_base(x) || !on_base(y))
      throw NotOnQuadric("verify_ivory_delta: point is not on the base");
    const Matrix lp = l_prime(lambda);
    const ProjectivePoint lx(lp * x.coords(), policy_);
    const ProjectivePoint ly(lp * y.coords(), policy_);
    const double lhs = delta_metric(ip_, x, ly, policy_);
    const double rhs = delta_metric(ip_, lx, y, policy_);
    return std::abs(std::abs(lhs) - std::abs(rhs));
  }

  /// Signed squared-diagonal difference |rho^2(x - l'(y)) - rho^2(y - l'(x))|
  /// in the affine chart (last coordinate 1), rho^2 taken with the ambient
  /// form on the chart difference vectors.
  double verify_ivory_affine(double lambda, const ProjectivePoint& x,
                             const ProjectivePoint& y,
                             const ChartSpec& chart = {}) const {
    if (!on_base(x) || !on_base(y))
      throw NotOnQuadric("verify_ivory_affine: point is not on the base");
    const Matrix lp = l_prime(lambda);
    const Vector xc = chart_normalize(x.coords(), chart);
    const Vector yc = chart_normalize(y.coords(), chart);
    const Vector lxc = chart_normalize(lp * x.coords(), chart);
    const Vector lyc = chart_normalize(lp * y.coords(), chart);
    const Vector d1 = xc - lyc;
    const Vector d2 = yc - lxc;
    return std::abs(inner(ip_, d1, d1) - inner(ip_, d2, d2));
  }

  /// Central-difference check of d/dlambda l_lambda(u) = -1/2 g_lambda
  /// (l_lambda(u)) for u in the base quadric's trace on Im p. Returns the
  /// relative deviation, O(h^2) by construction.
  double path_derivative_check(double lambda, const Vector& u,
                               double h) const {
    if (!in_domain(lambda - h) || !in_domain(lambda + h))
      throw OutOfDomain("path_derivative_check: lambda +- h outside domain");
    const Vector numeric =
        (l_lambda(lambda + h) * u - l_lambda(lambda - h) * u) / (2.0 * h);
    const Vector analytic =
        -0.5 * (g_lambda_operator(lambda) * (l_lambda(lambda) * u));
    return (numeric - analytic).norm() / numeric.norm();
  }

  /// Max over the grid of the normalized residual |<l'(u), g_mu(l'(u))>| for
  /// u on both the base and the member at mu.
  double psi_invariance_check(double mu, const std::vector<double>& grid,
                              const ProjectivePoint& u) const {
    const PencilMember psi = pencil_->member(mu);
    if (!on_base(u) || !contains(psi.quadric, u, 1e-8))
      throw NotOnBothQuadrics("psi_invariance_check: u not on both quadrics");
    double worst = 0.0;
    const double hnorm = ip_.gram().norm();
    for (double lambda : grid) {
      const Vector v = l_prime(lambda) * u.coords();
      const double res = std::abs(inner(ip_, v, psi.op * v)) /
                         (hnorm * psi.op.norm() * v.squaredNorm());
      worst = std::max(worst, res);
    }
    return worst;
  }

 private:
  Vector chart_normalize(const Vector& v, const ChartSpec& chart) const {
    if (chart.ideal || std::abs(v[chart.unit_coord]) < 1e-12 * v.norm())
      throw ChartFailure("chart normalization: vanishing chart coordinate");
    return v / v[chart.unit_coord];
  }

  void decompose() {
    try {
      decompose_once();
      return;
    } catch (const SqrtDomain&) {
      // A quadric fixes its operator only up to scale; for p = id the whole
      // scale of the representative is free, so try the mirrored and then a
      // shrunk one before giving up.
      if (!p_.is_identity()) throw;
    }
    const Matrix saved = g0_op_;
    try {
      g0_op_ = (-saved).eval();
      decompose_once();
      return;
    } catch (const SqrtDomain&) {
    }
    Eigen::EigenSolver<Matrix> es(saved);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (rho <= 0.0) throw SqrtDomain("ivory family: zero operator");
    g0_op_ = (saved / (2.0 * rho)).eval();
    decompose_once();  // nonreal/defective spectra still fail here
  }

  void decompose_once() {
    const Matrix R = restrict_to(g0_op_, p_.image_basis, policy_);
    if (R.rows() == 0) {
      domain_ = {-std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity()};
      return;
    }
    Eigen::EigenSolver<Matrix> es(R);
    const auto evs = es.eigenvalues();
    const double scale = std::max(1.0, evs.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < evs.size(); ++i)
      if (std::abs(evs[i].imag()) > policy_.sqrt_spectrum_tol * scale)
        throw SqrtDomain("ivory family: base spectrum is not real on Im p");
    Matrix V = es.eigenvectors().real();
    Eigen::JacobiSVD<Matrix> svd(V);
    if (svd.singularValues().minCoeff() <=
        policy_.rank_threshold * svd.singularValues().maxCoeff())
      throw SqrtDomain("ivory family: base is defective on Im p");
    mu_ = evs.real();
    // Eigenvalues up to 1 keep lambda = 1 in the (closed) domain; anything
    // beyond means id - g0 has a negative eigenvalue on Im p.
    for (Eigen::Index i = 0; i < mu_.size(); ++i)
      if (mu_[i] > 1.0 + policy_.sqrt_spectrum_tol * scale)
        throw SqrtDomain(
            "ivory family: id - g0 has a negative eigenvalue on Im p; the "
            "square-root interval does not reach lambda = 1");
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < mu_.size(); ++i) {
      if (mu_[i] > 0) hi = std::min(hi, 1.0 / mu_[i]);
      if (mu_[i] < 0) lo = std::max(lo, 1.0 / mu_[i]);
    }
    domain_ = {lo, hi};
    vecs_ = V;
    vecs_inv_ = V.inverse();
  }

  InnerProduct ip_;
  Projection p_;
  NumericPolicy policy_;
  std::optional<ProjectionPencil> pencil_;
  Matrix g0_op_;
  Matrix l_;
  Vector mu_;        // spectrum of g0 restricted to Im p
  Matrix vecs_;      // eigenbasis of the restriction
  Matrix vecs_inv_;
  std::pair<double, double> domain_{0.0, 0.0};
};

inline IvoryFamily build_family(const InnerProduct& ip, const Projection& p,
                                const Quadric& g0,
                                const NumericPolicy& policy =
                                    default_policy()) {
  return IvoryFamily(ip, p, g0, policy);
}

/// Residual of (p - l'^2)^-1 - l'(p - l'^2)^-1 l' - p, relative to ||p||,
/// for a self-adjoint l with Im p invariant (l' = lp + (id - p)).
inline double lemma7_identity_check(const InnerProduct& ip,
                                    const Projection& p, const Matrix& l,
                                    const NumericPolicy& policy =
                                        default_policy()) {
  const Matrix I = Matrix::Identity(ip.dim(), ip.dim());
  const Matrix lp = l * p.map + (I - p.map);
  const Matrix form = p.map - lp * lp;
  Eigen::JacobiSVD<Matrix> svd(form);
  if (svd.singularValues().minCoeff() <=
      policy.rank_threshold * svd.singularValues().maxCoeff())
    throw SingularForm("lemma7_identity_check: p - l'^2 is singular");
  const Matrix inv = form.inverse();
  return (inv - lp * inv * lp - p.map).norm() / p.map.norm();
}

}  // namespace ivory

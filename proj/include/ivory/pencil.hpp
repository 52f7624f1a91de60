#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "ivory/quadric.hpp"

namespace ivory {

/// Open interval of pencil parameters with no singular member.
struct TypeInterval {
  double lo;  // -inf allowed
  double hi;  // +inf allowed
  bool contains(double t) const { return t > lo && t < hi; }
};

struct PencilMember {
  double t;
  Quadric quadric;
  Matrix op;  // exact operator (g0^-1 - t P)^-1, no projective rescale
};

/// Tests the p-quadric conditions: Im p invariant under g with g = p g on
/// Im p, and g = -id on Ker p. The representative is first rescaled by least
/// squares so that G(I-P) = -(I-P); the test passes iff some scalar multiple
/// of g satisfies both conditions.
inline bool is_p_quadric(const Quadric& q, const Projection& p, double tol) {
  const Matrix& G0 = q.op();
  const Matrix& P = p.map;
  const Matrix I = Matrix::Identity(P.rows(), P.cols());
  Matrix G = G0;
  if (!p.is_identity()) {
    const Matrix X = G0 * (I - P);
    const Matrix Y = I - P;
    const double xx = X.squaredNorm();
    if (xx <= tol * G0.squaredNorm()) return false;  // g vanishes on Ker p
    const double s = -(X.array() * Y.array()).sum() / xx;
    // Only a positive rescale is allowed: the stored representative keeps
    // its sign, and g = -id on Ker p is a condition on the transformation,
    // not on the projective class.
    if (s <= 0.0) return false;
    G = s * G0;
  }
  const double scale = std::max(G.norm(), 1e-300);
  const bool invariant = (P * G * P - G * P).norm() <= tol * scale;
  const bool minus_id_on_kernel =
      (G * (I - P) + (I - P)).norm() <= tol * scale;
  return invariant && minus_id_on_kernel;
}

/// Rescale the operator of a p-quadric so that g = -id on Ker p exactly (in
/// least squares). For p = id the representative is returned unchanged.
inline Matrix p_quadric_representative(const Quadric& q, const Projection& p) {
  if (p.is_identity()) return q.raw_op();
  const Matrix I = Matrix::Identity(q.dim(), q.dim());
  const Matrix X = q.op() * (I - p.map);
  const Matrix Y = I - p.map;
  const double xx = X.squaredNorm();
  if (xx <= 1e-300) throw NotPQuadric("operator vanishes on Ker p");
  const double s = -(X.array() * Y.array()).sum() / xx;
  if (s <= 0.0) throw NotPQuadric("operator is -id on Ker p only after a sign flip");
  return s * q.op();
}

/// The family g_t^-1 = g0^-1 - t p generated by a regular quadric and a
/// projection. Singular parameters (real roots of det(g0^-1 - tP), with
/// multiplicity) are computed once from the generalized eigenproblem of the
/// pair (g0^-1, P).
class ProjectionPencil {
 public:
  ProjectionPencil(InnerProduct ip, Projection p, const Quadric& g0,
                   const NumericPolicy& policy = default_policy())
      : ip_(std::move(ip)), p_(std::move(p)), g0_(g0), policy_(policy) {
    if (!g0.regular())
      throw SingularQuadric("projection pencil: base quadric is singular");
    g0_op_ = is_p_quadric(g0, p_, 1e-8) ? p_quadric_representative(g0, p_)
                                        : g0.op();
    g0_inv_ = g0_op_.inverse();
    compute_singular_parameters();
  }

  const InnerProduct& ip() const { return ip_; }
  const Projection& projection() const { return p_; }
  const Quadric& base() const { return g0_; }
  const Matrix& base_op() const { return g0_op_; }
  const Matrix& base_inv() const { return g0_inv_; }

  const std::vector<double>& singular_parameters() const {
    return singular_params_;
  }

  std::vector<TypeInterval> type_components() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<TypeInterval> out;
    double lo = -inf;
    for (double s : distinct_params_) {
      out.push_back({lo, s});
      lo = s;
    }
    out.push_back({lo, inf});
    return out;
  }

  /// Distinguished degenerate "member at infinity": inverse-dual = P itself.
  Matrix member_at_infinity_inverse_dual() const { return p_.map; }

  Matrix member_operator(double t) const {
    check_regular_parameter(t);
    return (g0_inv_ - t * p_.map).inverse();
  }

  PencilMember member(double t) const {
    Matrix op = member_operator(t);
    return PencilMember{t, Quadric(ip_, op, policy_), std::move(op)};
  }

  bool is_singular_parameter(double t) const {
    for (double s : singular_params_)
      if (std::abs(t - s) <= 1e-9 * (1.0 + std::abs(s))) return true;
    return false;
  }

  /// Least-squares fit g^-1 = lambda * g0^-1 + mu * P. Returns the
  /// coefficients when the relative residual is below tol.
  std::optional<std::pair<double, double>> contains_quadric(
      const Quadric& q, double tol) const {
    if (!q.regular())
      throw SingularQuadric("contains_quadric: quadric is not regular");
    const Matrix ginv = q.op().inverse();
    Eigen::Matrix2d gram;
    gram << g0_inv_.squaredNorm(),
        (g0_inv_.array() * p_.map.array()).sum(),
        (g0_inv_.array() * p_.map.array()).sum(), p_.map.squaredNorm();
    Eigen::Vector2d rhs;
    rhs << (ginv.array() * g0_inv_.array()).sum(),
        (ginv.array() * p_.map.array()).sum();
    const Eigen::Vector2d coef = gram.ldlt().solve(rhs);
    const Matrix fit = coef[0] * g0_inv_ + coef[1] * p_.map;
    if ((fit - ginv).norm() > tol * ginv.norm()) return std::nullopt;
    return std::make_pair(coef[0], coef[1]);
  }

  /// Residual of the orthogonal-intersection identity <p(g0 x), g_t x> at a
  /// common point of the base and the member at t, normalized by the factor
  /// norms. Throws if x is not on both quadrics.
  double orthogonality_check(double t, const ProjectivePoint& x,
                             double tol) const {
    const PencilMember m = member(t);
    if (!contains(g0_, x, tol))
      throw NotAnIntersectionPoint("point is not on the base quadric");
    if (!contains(m.quadric, x, tol))
      throw NotAnIntersectionPoint("point is not on the member quadric");
    const Vector gx = g0_op_ * x.coords();
    const Vector gtx = m.op * x.coords();
    const double denom = gx.norm() * gtx.norm() * ip_.gram().norm();
    return std::abs(inner(ip_, p_.map * gx, gtx)) / denom;
  }

 private:
  void check_regular_parameter(double t) const {
    if (is_singular_parameter(t))
      throw SingularParameter("pencil member parameter is singular");
  }

  void compute_singular_parameters() {
    Eigen::GeneralizedEigenSolver<Matrix> ges;
    ges.compute(g0_inv_, p_.map, false);
    const auto alphas = ges.alphas();
    const auto betas = ges.betas();
    const double scale =
        std::max(g0_inv_.norm(), p_.map.norm());
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
      if (std::abs(betas[i]) <= 1e-12 * scale) continue;  // member at infinity
      const std::complex<double> t = alphas[i] / betas[i];
      if (std::abs(t.imag()) > 1e-9 * (1.0 + std::abs(t.real()))) continue;
      singular_params_.push_back(t.real());
    }
    std::sort(singular_params_.begin(), singular_params_.end());
    for (double s : singular_params_) {
      if (distinct_params_.empty() ||
          s - distinct_params_.back() > 1e-8 * (1.0 + std::abs(s)))
        distinct_params_.push_back(s);
    }
  }

  InnerProduct ip_;
  Projection p_;
  Quadric g0_;
  NumericPolicy policy_;
  Matrix g0_op_;
  Matrix g0_inv_;
  std::vector<double> singular_params_;
  std::vector<double> distinct_params_;
};

struct ConicIntersection {
  ProjectivePoint point;
  int multiplicity;
};

namespace detail {

inline Matrix cross_matrix(const Vector& p) {
  Matrix m(3, 3);
  m << 0, p[2], -p[1], -p[2], 0, p[0], p[1], -p[0], 0;
  return m;
}

/// Split a degenerate 3x3 conic matrix into at most two real lines
/// (adjugate-point construction). Returns row vectors; empty when the line
/// pair is complex.
inline std::vector<Vector> split_degenerate_conic(Matrix C) {
  const double m = C.cwiseAbs().maxCoeff();
  if (m <= 0) return {};
  C /= m;
  Matrix B(3, 3);  // adjugate
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix minor(2, 2);
      int rr = 0;
      for (int r = 0; r < 3; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < 3; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = C(r, c);
        }
        ++rr;
      }
      B(j, i) = ((i + j) % 2 ? -1 : 1) * minor.determinant();
    }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(B(i, i)) > std::abs(B(best, best))) best = i;
  if (std::abs(B(best, best)) > 1e-10) {
    if (B(best, best) > 0) return {};  // complex line pair
    const double beta = std::sqrt(-B(best, best));
    const Vector p = B.col(best) / beta;
    const Matrix D = C + cross_matrix(p);
    int ri = 0, cj = 0;
    D.cwiseAbs().maxCoeff(&ri, &cj);
    return {D.row(ri).transpose(), D.col(cj)};
  }
  // Rank 1: C = +-(l l^T), a double line.
  int bi = 0;
  C.diagonal().cwiseAbs().maxCoeff(&bi);
  if (std::abs(C(bi, bi)) <= 1e-12) return {};
  Vector l = C.col(bi) / std::sqrt(std::abs(C(bi, bi)));
  return {l, l};
}

/// Two independent points spanning the line l (row form): x with l.x = 0.
inline std::pair<Vector, Vector> line_span(const Vector& l) {
  int k = 0;
  l.cwiseAbs().maxCoeff(&k);
  Vector p1 = Vector::Zero(3), p2 = Vector::Zero(3);
  const int a = (k + 1) % 3, b = (k + 2) % 3;
  p1[a] = l[k];
  p1[k] = -l[a];
  p2[b] = l[k];
  p2[k] = -l[b];
  return {p1, p2};
}

/// Newton polish of a common point of two conics, on the unit sphere chart.
inline Vector polish_intersection(const Matrix& T1, const Matrix& T2,
                                  Vector x) {
  x.normalize();
  for (int it = 0; it < 20; ++it) {
    Eigen::Vector3d f;
    f << x.dot(T1 * x), x.dot(T2 * x), x.squaredNorm() - 1.0;
    if (f.cwiseAbs().maxCoeff() < 1e-14) break;
    Matrix J(3, 3);
    J.row(0) = 2.0 * (T1 * x).transpose();
    J.row(1) = 2.0 * (T2 * x).transpose();
    J.row(2) = 2.0 * x.transpose();
    const Vector step = J.fullPivLu().solve(f);
    x -= step;
    x.normalize();
    if (step.norm() < 1e-15) break;
  }
  return x;
}

}  // namespace detail

/// Real intersection points of two distinct conics, via a degenerate member
/// of their line pencil. Up to four points; a tangency is reported once with
/// multiplicity 2.
inline std::vector<ConicIntersection> intersect_conics(
    const Quadric& q1, const Quadric& q2,
    const NumericPolicy& policy = default_policy()) {
  if (q1.dim() != 3 || q2.dim() != 3)
    throw UnsupportedDimension("intersect_conics: only conics are supported");
  Matrix T1 = q1.coordinate_matrix();
  Matrix T2 = q2.coordinate_matrix();
  if (T1.cwiseAbs().maxCoeff() <= 0 || T2.cwiseAbs().maxCoeff() <= 0)
    throw DegenerateInput("intersect_conics: zero coordinate matrix");
  T1 /= T1.cwiseAbs().maxCoeff();
  T2 /= T2.cwiseAbs().maxCoeff();
  {
    const double num = (T1.array() * T2.array()).sum();
    if (std::abs(std::abs(num) - T1.norm() * T2.norm()) <=
        1e-12 * T1.norm() * T2.norm())
      throw IdenticalQuadrics("intersect_conics: inputs coincide");
  }
  // Candidate degenerate members C = T1 + mu T2 from det(T1 + mu T2) = 0.
  std::vector<Matrix> degenerates;
  if (std::abs(T2.determinant()) < 1e-12) degenerates.push_back(T2);
  Eigen::GeneralizedEigenSolver<Matrix> ges;
  ges.compute(T1, -T2, false);
  for (Eigen::Index i = 0; i < ges.alphas().size(); ++i) {
    if (std::abs(ges.betas()[i]) <= 1e-12) continue;
    const std::complex<double> mu = ges.alphas()[i] / ges.betas()[i];
    if (std::abs(mu.imag()) > 1e-9 * (1.0 + std::abs(mu.real()))) continue;
    degenerates.push_back(T1 + mu.real() * T2);
  }
  std::vector<ConicIntersection> out;
  auto record = [&](const Vector& raw, int mult) {
    ProjectivePoint pt(detail::polish_intersection(T1, T2, raw), policy);
    const double tol = 1e-9;
    const double s1 = T1.norm() * pt.coords().squaredNorm();
    const double s2 = T2.norm() * pt.coords().squaredNorm();
    if (std::abs(pt.coords().dot(T1 * pt.coords())) > tol * s1) return;
    if (std::abs(pt.coords().dot(T2 * pt.coords())) > tol * s2) return;
    for (auto& seen : out) {
      if (seen.point.same_point(pt, 1e-8)) {
        seen.multiplicity = std::max(seen.multiplicity, mult);
        return;
      }
    }
    out.push_back({std::move(pt), mult});
  };
  for (const Matrix& C : degenerates) {
    for (const Vector& line : detail::split_degenerate_conic(C)) {
      const auto [p1, p2] = detail::line_span(line);
      const double a = p1.dot(T1 * p1);
      const double b = p1.dot(T1 * p2);  // half cross term
      const double c = p2.dot(T1 * p2);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      if (scale <= 0) continue;
      const double disc = b * b - a * c;
      if (std::abs(a) < 1e-13 * scale) {
        if (std::abs(b) > 1e-13 * scale) record(p1, 1);
        if (std::abs(b) > 1e-13 * scale) record(p2 - (c / (2 * b)) * p1, 1);
        continue;
      }
      if (disc < -1e-12 * scale * scale) continue;
      if (disc <= 1e-12 * scale * scale) {
        record((-b / a) * p1 + p2, 2);  // tangency
      } else {
        const double s = std::sqrt(disc);
        record(((-b + s) / a) * p1 + p2, 1);
        record(((-b - s) / a) * p1 + p2, 1);
      }
    }
  }
  return out;
}

}  // namespace ivory

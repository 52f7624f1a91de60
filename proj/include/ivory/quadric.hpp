#pragma once

#include <optional>
#include <vector>

#include "ivory/linalg.hpp"

namespace ivory {

/// A projective quadric: the zero set of <x, g(x)> for a self-adjoint g.
/// The stored representative is scaled so its max-abs entry is 1 (sign kept),
/// and equality of quadrics is equality of representatives up to scale.
class Quadric {
 public:
  Quadric(InnerProduct ip, Matrix g,
          const NumericPolicy& policy = default_policy())
      : ip_(std::move(ip)), g_(std::move(g)), policy_(policy) {
    if (g_.rows() != ip_.dim() || g_.cols() != ip_.dim())
      throw DimensionMismatch("quadric: operator size does not match form");
    if (!ivory::is_self_adjoint(ip_, g_, policy.self_adjoint_tol))
      throw DegenerateInput("quadric: operator is not self-adjoint");
    const double m = g_.cwiseAbs().maxCoeff();
    if (m < policy.normalization_floor)
      throw DegenerateInput("quadric: zero operator");
    raw_ = g_;
    g_ /= m;
    const Matrix T = coordinate_matrix();
    Eigen::JacobiSVD<Matrix> svd(T);
    regular_ = svd.singularValues().minCoeff() >
               policy.rank_threshold * svd.singularValues().maxCoeff();
  }

  const InnerProduct& ip() const { return ip_; }
  const Matrix& op() const { return g_; }
  /// The operator exactly as supplied, before max-abs normalization. The
  /// scale is meaningful for p = id constructions, where no kernel anchors it.
  const Matrix& raw_op() const { return raw_; }
  bool regular() const { return regular_; }
  int dim() const { return ip_.dim(); }

  /// Coordinate matrix T = H g of the bilinear form.
  Matrix coordinate_matrix() const { return ip_.gram() * g_; }

  bool same_quadric(const Quadric& other, double tol = 1e-9) const {
    const double num = (g_.array() * other.g_.array()).sum();
    const double den = g_.norm() * other.g_.norm();
    return std::abs(std::abs(num) - den) <= tol * den;
  }

 private:
  InnerProduct ip_;
  Matrix g_;
  Matrix raw_;
  NumericPolicy policy_;
  bool regular_;
};

inline double evaluate(const Quadric& q, const Vector& x) {
  return inner(q.ip(), x, q.op() * x);
}

inline bool contains(const Quadric& q, const ProjectivePoint& x, double tol) {
  const Vector& v = x.coords();
  const double scale = q.ip().gram().norm() * q.op().norm() * v.squaredNorm();
  return std::abs(evaluate(q, v)) <= tol * scale;
}

/// Symmetric matrix of the pulled-back dual form: pseudo-inverse of T = Hg,
/// supported on Im T and zero on its coordinate-orthogonal complement.
struct DualPullback {
  Matrix form;
};

inline DualPullback dual_pullback(const Quadric& q,
                                  const NumericPolicy& policy =
                                      default_policy()) {
  return DualPullback{pseudo_inverse(q.coordinate_matrix(), policy)};
}

/// The quadric whose inverse-dual operator is k g^-1 k* (ip-adjoint k*).
inline Quadric dual_k_image(const Quadric& q, const Matrix& k,
                            const NumericPolicy& policy = default_policy()) {
  if (!q.regular())
    throw SingularQuadric("dual_k_image: quadric is not regular");
  const Matrix inv_dual = k * q.op().inverse() * adjoint(q.ip(), k);
  Eigen::JacobiSVD<Matrix> svd(inv_dual);
  if (svd.singularValues().minCoeff() <=
      policy.rank_threshold * svd.singularValues().maxCoeff())
    throw SingularQuadric("dual_k_image: image quadric is degenerate");
  return Quadric(q.ip(), inv_dual.inverse(), policy);
}

/// Conjugate direction g(x) of the tangent hyperplane at x on q.
inline Vector gradient(const Quadric& q, const ProjectivePoint& x,
                       const NumericPolicy& policy = default_policy()) {
  if (!contains(q, x, 1e-8))
    throw NotOnQuadric("gradient: point is not on the quadric");
  const Vector g = q.op() * x.coords();
  if (g.norm() <= policy.normalization_floor * q.op().norm())
    throw ZeroGradient("gradient: singular point of the quadric");
  return g;
}

/// Chart for sampling a conic: either an affine chart (one coordinate set
/// to 1) or the ideal line x3 = 0.
struct ChartSpec {
  bool ideal = false;
  int unit_coord = 2;
};

namespace detail {

// Polish a root of the scalar quadratic f(r) = a r^2 + b r + c by bisection
// on a bracketing interval, falling back to the closed-form value.
inline double refine_root(double a, double b, double c, double r) {
  auto f = [&](double t) { return (a * t + b) * t + c; };
  double lo = r - 1e-6, hi = r + 1e-6;
  if (f(lo) * f(hi) > 0) return r;
  if (f(lo) > f(hi)) std::swap(lo, hi);
  while (hi - lo > 1e-12 && lo < hi) {
    const double mid = (lo + hi) / 2.0;
    (f(mid) <= 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace detail

/// Deterministic sampling of the real trace of a conic in a chart: 720 sweep
/// directions, roots per ray from the quadratic restriction, refined to 1e-12
/// parameter width. Empty traces yield an empty list.
inline std::vector<ProjectivePoint> sample_points(
    const Quadric& q, int count, const ChartSpec& chart = {},
    const NumericPolicy& policy = default_policy()) {
  if (q.dim() != 3)
    throw UnsupportedDimension("sample_points: only conics are supported");
  const Matrix T = q.coordinate_matrix();
  std::vector<ProjectivePoint> out;
  auto push_if_new = [&](const Vector& v) {
    if (static_cast<int>(out.size()) >= count) return;
    ProjectivePoint p(v, policy);
    if (!contains(q, p, policy.membership_tol)) return;
    for (const auto& seen : out)
      if (seen.same_point(p, 1e-9)) return;
    out.push_back(std::move(p));
  };
  const int sweeps = 720;
  if (chart.ideal) {
    // Points (cos t, sin t, 0): locate sign changes of the restricted form.
    auto f = [&](double t) {
      Vector v(3);
      v << std::cos(t), std::sin(t), 0.0;
      return v.dot(T * v);
    };
    double prev_t = 0.0, prev_f = f(0.0);
    for (int k = 1; k <= sweeps; ++k) {
      const double t = M_PI * k / sweeps;
      const double ft = f(t);
      if (prev_f == 0.0) {
        Vector v(3);
        v << std::cos(prev_t), std::sin(prev_t), 0.0;
        push_if_new(v);
      } else if (prev_f * ft < 0.0) {
        double lo = prev_t, hi = t;
        while (hi - lo > 1e-12)
          (f((lo + hi) / 2) * f(lo) > 0 ? lo : hi) = (lo + hi) / 2;
        Vector v(3);
        v << std::cos((lo + hi) / 2), std::sin((lo + hi) / 2), 0.0;
        push_if_new(v);
      }
      prev_t = t;
      prev_f = ft;
    }
    return out;
  }
  Vector base = Vector::Zero(3);
  base[chart.unit_coord] = 1.0;
  for (int k = 0; k < sweeps && static_cast<int>(out.size()) < count; ++k) {
    const double theta = 2.0 * M_PI * k / sweeps;
    Vector dir = Vector::Zero(3);
    int j = 0;
    for (int i = 0; i < 3; ++i) {
      if (i == chart.unit_coord) continue;
      dir[i] = (j == 0 ? std::cos(theta) : std::sin(theta));
      ++j;
    }
    const double a = dir.dot(T * dir);
    const double b = 2.0 * dir.dot(T * base);
    const double c = base.dot(T * base);
    std::vector<double> roots;
    if (std::abs(a) < 1e-14) {
      if (std::abs(b) > 1e-14) roots.push_back(-c / b);
    } else {
      const double disc = b * b - 4 * a * c;
      if (disc >= 0) {
        const double s = std::sqrt(disc);
        // Numerically stable pair of quadratic roots.
        const double u = -(b + (b >= 0 ? s : -s)) / 2.0;
        roots.push_back(u / a);
        if (std::abs(u) > 1e-300) roots.push_back(c / u);
      }
    }
    for (double r : roots) {
      if (!std::isfinite(r) || r <= 0) continue;
      const double polished = detail::refine_root(a, b, c, r);
      push_if_new(base + polished * dir);
    }
  }
  return out;
}

}  // namespace ivory

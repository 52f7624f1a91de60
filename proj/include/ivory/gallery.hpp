#pragma once

#include <map>
#include <string>

#include "ivory/ivory_family.hpp"

namespace ivory {

/// A ready (inner product, projection, base quadric) triple for one of the
/// worked plane geometries.
struct GalleryScene {
  std::string name;
  InnerProduct ip;
  Projection p;
  Quadric g0;
  std::map<std::string, double> params;
};

namespace detail {

inline Projection plane_projection() {
  Matrix image(3, 2), kernel(3, 1);
  image << 1, 0, 0, 1, 0, 0;
  kernel << 0, 0, 1;
  return make_projection(image, kernel);
}

}  // namespace detail

/// Confocal conics with foci on the first axis: H = id, P = diag(1,1,0),
/// g0 = diag(1/(c^2+lambda0), 1/lambda0, -1).
inline GalleryScene euclidean_scene(double c, double lambda0,
                                    const NumericPolicy& policy =
                                        default_policy()) {
  if (c == 0.0 || lambda0 == 0.0 || lambda0 == -c * c)
    throw DegenerateParameter("euclidean_scene: c != 0, lambda0 not in {0, -c^2}");
  InnerProduct ip(Matrix::Identity(3, 3), policy);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0 / (c * c + lambda0);
  g(1, 1) = 1.0 / lambda0;
  g(2, 2) = -1.0;
  return GalleryScene{"euclidean", ip, detail::plane_projection(),
                      Quadric(ip, g, policy),
                      {{"c", c}, {"lambda0", lambda0}}};
}

/// Focal half-distance squared of the conic with inverse dual
/// alpha * Phi + beta * id: c_alpha^2 = alpha / (alpha - beta) * c^2. Shows
/// that the id-pencil does not keep foci fixed.
inline double foci_scaling(double c, double alpha, double beta) {
  if (alpha == beta || alpha == 0.0)
    throw DegenerateParameter("foci_scaling: alpha != beta, alpha != 0");
  return alpha / (alpha - beta) * c * c;
}

/// Confocal conics of the pseudo-Euclidean plane: H = diag(1,-1,1),
/// P = diag(1,1,0), g0 = diag(1/sigma, -1/tau, -1); members trace
/// x1^2/(sigma-t) + x2^2/(tau+t) = 1.
inline GalleryScene minkowski_scene(double sigma, double tau,
                                    const NumericPolicy& policy =
                                        default_policy()) {
  if (sigma * tau * (sigma + tau) == 0.0)
    throw DegenerateParameter("minkowski_scene: need sigma tau (sigma+tau) != 0");
  Matrix H = Matrix::Identity(3, 3);
  H(1, 1) = -1.0;
  InnerProduct ip(H, policy);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0 / sigma;
  g(1, 1) = -1.0 / tau;
  g(2, 2) = -1.0;
  return GalleryScene{"minkowski", ip, detail::plane_projection(),
                      Quadric(ip, g, policy),
                      {{"sigma", sigma}, {"tau", tau}}};
}

enum class CurvedKind { elliptic, hyperbolic };

/// Cone families of the elliptic (H = id) and hyperbolic (H = diag(1,1,-1))
/// plane models, with p = id: g0 = diag(1/c^2, 1/(c^2-b^2), 1/(c^2+g^2)) and
/// constraint b^2 + g^2 = 1 (elliptic) or b^2 - g^2 = -1 (hyperbolic).
inline GalleryScene curved_scene(double c, double beta, double gamma,
                                 CurvedKind kind,
                                 const NumericPolicy& policy =
                                     default_policy()) {
  const double constraint = kind == CurvedKind::elliptic
                                ? beta * beta + gamma * gamma - 1.0
                                : beta * beta - gamma * gamma + 1.0;
  if (std::abs(constraint) > 1e-12)
    throw DegenerateParameter("curved_scene: parameter constraint violated");
  const double c2 = c * c;
  if (c2 == 0.0 || c2 - beta * beta == 0.0 || c2 + gamma * gamma == 0.0)
    throw DegenerateParameter("curved_scene: vanishing denominator");
  Matrix H = Matrix::Identity(3, 3);
  if (kind == CurvedKind::hyperbolic) H(2, 2) = -1.0;
  InnerProduct ip(H, policy);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0 / c2;
  g(1, 1) = 1.0 / (c2 - beta * beta);
  g(2, 2) = 1.0 / (c2 + gamma * gamma);
  return GalleryScene{
      kind == CurvedKind::elliptic ? "elliptic" : "hyperbolic", ip,
      identity_projection(3), Quadric(ip, g, policy),
      {{"c", c}, {"beta", beta}, {"gamma", gamma}}};
}

/// The absolute of the Euclidean plane model: rank-2 form diag(1,1,0), whose
/// only real point is (0,0,1).
inline Quadric absolute_quadric(const NumericPolicy& policy =
                                    default_policy()) {
  InnerProduct ip(Matrix::Identity(3, 3), policy);
  Matrix omega = Matrix::Zero(3, 3);
  omega(0, 0) = omega(1, 1) = 1.0;
  return Quadric(ip, omega, policy);
}

}  // namespace ivory

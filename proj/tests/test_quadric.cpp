#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ivory/gallery.hpp"
#include "ivory/quadric.hpp"

using namespace ivory;

namespace {

Matrix diag3(double a, double b, double c) {
  Vector d(3);
  d << a, b, c;
  return d.asDiagonal();
}

InnerProduct minkowski() { return InnerProduct(diag3(1, -1, 1)); }

Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

// The worked cone of the indefinite plane: -3x1^2 + 8x2^2 - x3^2 = 0.
Quadric worked_cone() { return Quadric(minkowski(), diag3(-3, -8, -1)); }

}  // namespace

TEST_CASE("evaluate") {
  Quadric q = worked_cone();
  CHECK(evaluate(q, v3(1, 1, std::sqrt(5.0))) == doctest::Approx(0.0));
  // Minkowski gallery base through (sqrt(2/3), sqrt(2/3), 1).
  GalleryScene mink = minkowski_scene(2, 1);
  const double s = std::sqrt(2.0 / 3.0);
  CHECK(std::abs(evaluate(mink.g0, v3(s, s, 1))) <= 1e-12);
  // homogeneity
  Vector x = v3(0.3, -1.2, 0.8);
  CHECK(evaluate(q, (2.5 * x).eval()) ==
        doctest::Approx(2.5 * 2.5 * evaluate(q, x)));
}

TEST_CASE("contains") {
  Quadric q = worked_cone();
  ProjectivePoint on(v3(1, std::sqrt(0.375), 0));
  ProjectivePoint off(v3(1, 0, 0));
  CHECK(contains(q, on, 1e-10));
  CHECK_FALSE(contains(q, off, 1e-10));
  ProjectivePoint rescaled(v3(-7, -7 * std::sqrt(0.375), 0));
  CHECK(contains(q, rescaled, 1e-10));
}

TEST_CASE("dual_pullback") {
  InnerProduct eu(Matrix::Identity(3, 3));
  const double c2 = 1.0, lambda = 2.0;
  Quadric conic(eu, diag3(1 / (c2 + lambda), 1 / lambda, -1));
  Matrix pb = dual_pullback(conic).form;
  Matrix expected = diag3(c2 + lambda, lambda, -1);
  // projective representatives agree up to the stored normalization
  CHECK((pb / pb(2, 2) - expected / expected(2, 2)).norm() <= 1e-10);

  Quadric omega = absolute_quadric();
  Matrix pbo = dual_pullback(omega).form;
  CHECK((pbo / pbo(0, 0) - diag3(1, 1, 0)).norm() <= 1e-12);

  Quadric selfdual(eu, Matrix::Identity(3, 3));
  Matrix pbi = dual_pullback(selfdual).form;
  CHECK((pbi - Matrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("dual_pullback round trip restores the form on its image") {
  Quadric omega = absolute_quadric();
  const Matrix t = omega.coordinate_matrix();
  const Matrix twice = pseudo_inverse(pseudo_inverse(t));
  CHECK((twice - t).norm() <= 1e-10 * (1 + t.norm()));
  Quadric q = worked_cone();
  const Matrix tq = q.coordinate_matrix();
  CHECK((pseudo_inverse(pseudo_inverse(tq)) - tq).norm() <=
        1e-10 * (1 + tq.norm()));
  // regular case: pullback times coordinate matrix is the identity
  CHECK((pseudo_inverse(tq) * tq - Matrix::Identity(3, 3)).norm() <= 1e-10);
}

TEST_CASE("dual_k_image") {
  Quadric q = worked_cone();
  Quadric same = dual_k_image(q, Matrix::Identity(3, 3));
  CHECK(same.same_quadric(q));
  Quadric scaled = dual_k_image(q, (2.0 * Matrix::Identity(3, 3)).eval());
  CHECK(scaled.same_quadric(q));

  Quadric image = dual_k_image(q, diag3(2, 3, 1));
  // inverse dual diag(-4/3, -9/8, -1), so operator is its inverse
  Quadric expected(minkowski(), diag3(-3.0 / 4.0, -8.0 / 9.0, -1.0));
  CHECK(image.same_quadric(expected));

  Quadric singular = absolute_quadric();
  CHECK_THROWS_AS(dual_k_image(singular, Matrix::Identity(3, 3)),
                  SingularQuadric);
}

TEST_CASE("gradient") {
  Quadric q = worked_cone();
  ProjectivePoint x(v3(1, std::sqrt(0.375), 0));
  Vector g = gradient(q, x);
  Vector expected = v3(-3, -8 * std::sqrt(0.375), 0);
  // up to the point's and operator's normalization scale
  CHECK((g / g[0] - expected / expected[0]).norm() <= 1e-10);

  InnerProduct eu(Matrix::Identity(3, 3));
  Quadric sphere(eu, Matrix::Identity(3, 3));
  // empty real trace, so membership fails for real points
  CHECK_THROWS_AS(gradient(sphere, ProjectivePoint(v3(1, 0, 0))),
                  NotOnQuadric);

  Quadric omega = absolute_quadric();
  CHECK_THROWS_AS(gradient(omega, ProjectivePoint(v3(0, 0, 1))),
                  ZeroGradient);
}

TEST_CASE("gradient is conjugate to secant directions") {
  GalleryScene mink = minkowski_scene(2, 1);
  auto pts = sample_points(mink.g0, 32);
  REQUIRE(pts.size() >= 8);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    // secant between nearby chart points approximates a tangent direction
    Vector a = pts[i].coords() / pts[i].coords()[2];
    double best = 1e9;
    Vector bstar = a;
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      Vector b = pts[j].coords() / pts[j].coords()[2];
      if ((a - b).norm() < best) {
        best = (a - b).norm();
        bstar = b;
      }
    }
    if (best > 0.15) continue;  // sparse stretch of the sweep
    Vector w = a - bstar;
    Vector g = gradient(mink.g0, pts[i]);
    const double resid = std::abs(inner(mink.ip, w, g)) /
                         (w.norm() * g.norm() * mink.ip.gram().norm());
    CHECK(resid <= 0.1);  // secant, first order in spacing
  }
}

TEST_CASE("sample_points finds axis intercepts") {
  InnerProduct eu(Matrix::Identity(3, 3));
  Quadric ellipse(eu, diag3(0.5, 1, -1));  // x^2/2 + y^2 = 1
  auto pts = sample_points(ellipse, 400);
  auto found = [&](double a, double b, double c) {
    ProjectivePoint target(v3(a, b, c));
    for (const auto& p : pts)
      if (p.same_point(target, 1e-7)) return true;
    return false;
  };
  const double r2 = std::sqrt(2.0);
  CHECK(found(r2, 0, 1));
  CHECK(found(-r2, 0, 1));
  CHECK(found(0, 1, 1));
  CHECK(found(0, -1, 1));
  for (const auto& p : pts) CHECK(contains(ellipse, p, 1e-10));

  Quadric hyperbola(eu, diag3(2, -2, -1));  // x^2/0.5 - y^2/0.5 = 1
  auto hpts = sample_points(hyperbola, 64);
  bool v1 = false, v2 = false;
  const double r = std::sqrt(0.5);
  for (const auto& p : hpts) {
    if (p.same_point(ProjectivePoint(v3(r, 0, 1)), 1e-7)) v1 = true;
    if (p.same_point(ProjectivePoint(v3(-r, 0, 1)), 1e-7)) v2 = true;
  }
  CHECK(v1);
  CHECK(v2);

  // ellipse has no ideal points
  CHECK(sample_points(ellipse, 16, ChartSpec{true, 2}).empty());
  // hyperbola has two
  CHECK(sample_points(hyperbola, 16, ChartSpec{true, 2}).size() == 2);
}

TEST_CASE("empty real trace is legal") {
  InnerProduct eu(Matrix::Identity(3, 3));
  Quadric empty(eu, Matrix::Identity(3, 3));
  CHECK(sample_points(empty, 16).empty());
}

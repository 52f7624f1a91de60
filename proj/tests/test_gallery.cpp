#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ivory/gallery.hpp"
#include "ivory/pencil.hpp"

using namespace ivory;

namespace {

Matrix diag3(double a, double b, double c) {
  Vector d(3);
  d << a, b, c;
  return d.asDiagonal();
}

Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("euclidean scene") {
  GalleryScene s = euclidean_scene(1, 1);
  CHECK((s.ip.gram() - Matrix::Identity(3, 3)).norm() == 0.0);
  CHECK((s.p.map - diag3(1, 1, 0)).norm() <= 1e-14);
  CHECK((s.g0.raw_op() - diag3(0.5, 1, -1)).norm() <= 1e-14);
  CHECK(s.g0.regular());
  CHECK_THROWS_AS(euclidean_scene(0, 1), DegenerateParameter);
  CHECK_THROWS_AS(euclidean_scene(1, 0), DegenerateParameter);
  CHECK_THROWS_AS(euclidean_scene(1, -1), DegenerateParameter);
}

TEST_CASE("euclidean members realize the confocal family") {
  GalleryScene s = euclidean_scene(1.3, 0.7);
  ProjectionPencil pen(s.ip, s.p, s.g0);
  const double c2 = 1.3 * 1.3;
  for (double t : {-2.0, -0.5, 0.3, 1.2}) {
    if (pen.is_singular_parameter(t)) continue;
    const Matrix coord = s.ip.gram() * pen.member(t).op;
    const Matrix expected =
        diag3(1.0 / (c2 + 0.7 - t), 1.0 / (0.7 - t), -1.0);
    CHECK((coord - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("foci_scaling") {
  CHECK(foci_scaling(1, 2, 1) == doctest::Approx(2.0));
  CHECK(foci_scaling(1.7, 0.9, 0) == doctest::Approx(1.7 * 1.7));
  CHECK(foci_scaling(2, 1, -1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(foci_scaling(1, 1.5, 1.5), DegenerateParameter);
  CHECK_THROWS_AS(foci_scaling(1, 0, 1), DegenerateParameter);
}

TEST_CASE("minkowski scene") {
  GalleryScene s = minkowski_scene(2, 1);
  CHECK((s.ip.gram() - diag3(1, -1, 1)).norm() == 0.0);
  CHECK((s.g0.raw_op() - diag3(0.5, -1, -1)).norm() <= 1e-14);
  CHECK_THROWS_AS(minkowski_scene(0, 1), DegenerateParameter);
  CHECK_THROWS_AS(minkowski_scene(1, -1), DegenerateParameter);

  // member equations x1^2/(sigma-t) + x2^2/(tau+t) = 1, coefficient-wise
  ProjectionPencil pen(s.ip, s.p, s.g0);
  for (int k = 0; k <= 20; ++k) {
    const double t = -0.9 + 2.8 * k / 20.0;
    if (pen.is_singular_parameter(t)) continue;
    const Matrix coord = s.ip.gram() * pen.member(t).op;
    const Matrix expected = diag3(1.0 / (2.0 - t), 1.0 / (1.0 + t), -1.0);
    CHECK((coord - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("curved scenes") {
  CHECK_THROWS_AS(curved_scene(1, 0.5, 0.5, CurvedKind::elliptic),
                  DegenerateParameter);
  CHECK_THROWS_AS(curved_scene(1, 1, 1, CurvedKind::hyperbolic),
                  DegenerateParameter);
  CHECK_THROWS_AS(curved_scene(0.8, 0.8, 0.6, CurvedKind::elliptic),
                  DegenerateParameter);  // c^2 = beta^2

  GalleryScene ell = curved_scene(0.6, 0.8, 0.6, CurvedKind::elliptic);
  CHECK(ell.p.is_identity());
  CHECK((ell.ip.gram() - Matrix::Identity(3, 3)).norm() == 0.0);
  CHECK((ell.g0.raw_op() -
         diag3(1.0 / 0.36, 1.0 / (0.36 - 0.64), 1.0 / (0.36 + 0.36)))
            .norm() <= 1e-12);

  GalleryScene hyp = curved_scene(2, 0, 1, CurvedKind::hyperbolic);
  CHECK(hyp.ip.gram()(2, 2) == doctest::Approx(-1.0));
  CHECK((hyp.g0.raw_op() - diag3(0.25, 0.25, 0.2)).norm() <= 1e-14);

  // the p = id pencil reproduces (G^-1 - t id)^-1 exactly, in the given scale
  for (const GalleryScene& s : {ell, hyp}) {
    ProjectionPencil pen(s.ip, s.p, s.g0);
    const Matrix ginv = s.g0.raw_op().inverse();
    for (double t : {-1.0, 0.1, 1.7, 6.0}) {
      if (pen.is_singular_parameter(t)) continue;
      const Matrix expected =
          (ginv - t * Matrix::Identity(3, 3)).inverse();
      CHECK((pen.member(t).op - expected).norm() <=
            1e-10 * expected.norm());
    }
    // t = 0 gives back the defining cone
    CHECK(pen.member(0.0).quadric.same_quadric(s.g0));
  }
}

TEST_CASE("absolute quadric") {
  Quadric omega = absolute_quadric();
  CHECK_FALSE(omega.regular());
  CHECK(contains(omega, ProjectivePoint(v3(0, 0, 1)), 1e-12));
  CHECK_FALSE(contains(omega, ProjectivePoint(v3(1, 0, 0)), 1e-12));
  const Matrix pb = dual_pullback(omega).form;
  CHECK((pb / pb(0, 0) - diag3(1, 1, 0)).norm() <= 1e-12);
}

TEST_CASE("every scene is a p-quadric") {
  std::vector<GalleryScene> scenes = {
      euclidean_scene(1, 1),     euclidean_scene(2, -1),
      minkowski_scene(2, 1),     minkowski_scene(2, -4),
      curved_scene(0.6, 0.8, 0.6, CurvedKind::elliptic),
      curved_scene(2, 0, 1, CurvedKind::hyperbolic),
      curved_scene(2, 1, std::sqrt(2.0), CurvedKind::hyperbolic)};
  for (const auto& s : scenes) {
    CHECK(is_p_quadric(s.g0, s.p, 1e-12));
    CHECK(s.g0.regular());
  }
}

TEST_CASE("identity quadric is outside the euclidean confocal pencil") {
  GalleryScene s = euclidean_scene(1, 1);
  ProjectionPencil pen(s.ip, s.p, s.g0);
  Quadric identity(s.ip, Matrix::Identity(3, 3));
  CHECK_FALSE(pen.contains_quadric(identity, 1e-3).has_value());
}

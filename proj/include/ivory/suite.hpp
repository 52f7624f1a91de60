#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivory/gallery.hpp"
#include "ivory/ivory_family.hpp"

namespace ivory {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// A scene request plus verification parameters, as loaded from a JSON
/// config: either a named gallery scene with parameters, or explicit
/// matrices H, P, G0 (row-major).
struct SceneConfig {
  std::string scene;
  std::map<std::string, double> parameters;
  std::vector<double> lambda_grid{0.1, 0.25, 0.5, 0.75, 0.9};
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0;
  std::optional<Matrix> custom_H;
  std::optional<Matrix> custom_P;
  std::optional<Matrix> custom_G0;
  std::vector<double> quadrangle_ts;  // optional pair for emit_family
};

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct Report {
  std::string scene;
  std::vector<CheckRecord> checks;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;

  bool overall_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  ordered_json to_json() const {
    ordered_json out;
    out["scene"] = scene;
    int passed = 0;
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
      ordered_json rec;
      rec["name"] = c.name;
      rec["residual"] = c.residual;
      rec["threshold"] = c.threshold;
      rec["pass"] = c.pass;
      if (!c.note.empty()) rec["note"] = c.note;
      arr.push_back(rec);
      if (c.pass) ++passed;
    }
    out["summary"] = {{"checks", checks.size()},
                      {"passed", passed},
                      {"failed", checks.size() - passed},
                      {"overall_pass", overall_pass()}};
    out["checks"] = arr;
    ordered_json tols = ordered_json::object();
    for (const auto& [k, v] : tolerances) tols[k] = v;
    out["reproducibility"] = {
        {"seed", seed}, {"tolerances", tols}, {"version", kVersion}};
    return out;
  }
};

namespace detail {

inline Matrix parse_matrix(const ordered_json& rows, const std::string& key) {
  if (!rows.is_array() || rows.empty())
    throw ConfigError("config: " + key + " must be an array of rows");
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw ConfigError("config: " + key + " row " + std::to_string(i) +
                        " must have " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      if (!rows[i][j].is_number())
        throw ConfigError("config: " + key + " has a non-numeric entry");
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

/// Recover explicit image/kernel bases from an idempotent matrix.
inline Projection projection_from_matrix(const Matrix& P,
                                         const NumericPolicy& policy) {
  const Eigen::Index n = P.rows();
  if ((P * P - P).norm() > 1e-10 * std::max(1.0, P.norm()))
    throw ConfigError("config: P is not idempotent");
  Eigen::FullPivLU<Matrix> lu(P);
  lu.setThreshold(1e-10);
  const Matrix image = lu.image(P);
  const Matrix kernel = lu.kernel();
  if (image.cols() + kernel.cols() != n)
    throw ConfigError("config: P has an inconsistent rank split");
  return make_projection(image, kernel, policy);
}

/// Numeric residual behind is_p_quadric, after the positive least-squares
/// rescale of the representative.
inline double p_quadric_residual(const Quadric& q, const Projection& p) {
  const Matrix& G0 = q.op();
  const Matrix& P = p.map;
  const Matrix I = Matrix::Identity(P.rows(), P.cols());
  Matrix G = G0;
  if (!p.is_identity()) {
    const Matrix X = G0 * (I - P);
    const double xx = X.squaredNorm();
    if (xx <= 1e-300) return 1.0;
    const double s = -(X.array() * (I - P).array()).sum() / xx;
    if (s <= 0.0) return 1.0;
    G = s * G0;
  }
  const double scale = std::max(G.norm(), 1e-300);
  return std::max((P * G * P - G * P).norm(),
                  (G * (I - P) + (I - P)).norm()) /
         scale;
}

}  // namespace detail

inline NumericPolicy policy_from_config(const SceneConfig& cfg) {
  NumericPolicy policy = default_policy();
  auto set = [&](const char* name, double& field) {
    auto it = cfg.tolerances.find(name);
    if (it != cfg.tolerances.end()) field = it->second;
  };
  set("self_adjoint_tol", policy.self_adjoint_tol);
  set("idempotent_tol", policy.idempotent_tol);
  set("rank_threshold", policy.rank_threshold);
  set("sqrt_residual_tol", policy.sqrt_residual_tol);
  set("membership_tol", policy.membership_tol);
  set("scale_equality_tol", policy.scale_equality_tol);
  set("basis_condition_bound", policy.basis_condition_bound);
  set("isotropic_tol", policy.isotropic_tol);
  set("singular_param_tol", policy.singular_param_tol);
  set("invariant_subspace_tol", policy.invariant_subspace_tol);
  set("fd_step", policy.fd_step);
  set("normalization_floor", policy.normalization_floor);
  set("sqrt_spectrum_tol", policy.sqrt_spectrum_tol);
  return policy;
}

inline SceneConfig load_config(const ordered_json& doc) {
  SceneConfig cfg;
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  if (!doc.contains("scene"))
    throw ConfigError("config: missing required key 'scene'");
  const auto& scene = doc["scene"];
  if (scene.is_string()) {
    cfg.scene = scene.get<std::string>();
  } else if (scene.is_object()) {
    cfg.scene = "custom";
    for (const char* key : {"H", "P", "G0"})
      if (!scene.contains(key))
        throw ConfigError(std::string("config: custom scene needs key '") +
                          key + "'");
    cfg.custom_H = detail::parse_matrix(scene["H"], "H");
    cfg.custom_P = detail::parse_matrix(scene["P"], "P");
    cfg.custom_G0 = detail::parse_matrix(scene["G0"], "G0");
  } else {
    throw ConfigError("config: 'scene' must be a name or a matrix object");
  }
  if (doc.contains("parameters")) {
    if (!doc["parameters"].is_object())
      throw ConfigError("config: 'parameters' must be an object");
    for (const auto& [k, v] : doc["parameters"].items()) {
      if (!v.is_number())
        throw ConfigError("config: parameter '" + k + "' must be numeric");
      cfg.parameters[k] = v.get<double>();
    }
  }
  if (doc.contains("lambda_grid")) {
    if (!doc["lambda_grid"].is_array())
      throw ConfigError("config: 'lambda_grid' must be an array");
    cfg.lambda_grid.clear();
    for (const auto& v : doc["lambda_grid"]) {
      if (!v.is_number())
        throw ConfigError("config: 'lambda_grid' entries must be numeric");
      cfg.lambda_grid.push_back(v.get<double>());
    }
  }
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object())
      throw ConfigError("config: 'tolerances' must be an object");
    for (const auto& [k, v] : doc["tolerances"].items()) {
      if (!v.is_number())
        throw ConfigError("config: tolerance '" + k + "' must be numeric");
      cfg.tolerances[k] = v.get<double>();
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ConfigError("config: 'seed' must be an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("quadrangles")) {
    if (!doc["quadrangles"].is_array() || doc["quadrangles"].size() != 2)
      throw ConfigError("config: 'quadrangles' must be a pair of parameters");
    for (const auto& v : doc["quadrangles"])
      cfg.quadrangle_ts.push_back(v.get<double>());
  }
  return cfg;
}

inline SceneConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return load_config(doc);
}

inline GalleryScene build_scene(const SceneConfig& cfg,
                                const NumericPolicy& policy) {
  auto param = [&](const char* name, double fallback) {
    auto it = cfg.parameters.find(name);
    return it == cfg.parameters.end() ? fallback : it->second;
  };
  try {
    if (cfg.scene == "euclidean")
      return euclidean_scene(param("c", 1.0), param("lambda0", 1.0), policy);
    if (cfg.scene == "minkowski")
      return minkowski_scene(param("sigma", 2.0), param("tau", 1.0), policy);
    if (cfg.scene == "elliptic")
      return curved_scene(param("c", 0.6), param("beta", 0.8),
                          param("gamma", 0.6), CurvedKind::elliptic, policy);
    if (cfg.scene == "hyperbolic")
      return curved_scene(param("c", 2.0), param("beta", 0.0),
                          param("gamma", 1.0), CurvedKind::hyperbolic, policy);
    if (cfg.scene == "custom") {
      InnerProduct ip(*cfg.custom_H, policy);
      Projection p = detail::projection_from_matrix(*cfg.custom_P, policy);
      Quadric g0(ip, *cfg.custom_G0, policy);
      return GalleryScene{"custom", ip, p, g0, cfg.parameters};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: invalid scene data: ") + e.what());
  }
  throw ConfigError("config: unknown scene '" + cfg.scene + "'");
}

namespace detail {

/// Real points of the base quadric inside Im p (directions u with
/// <u, g0 u> = 0), found from the restricted 2x2 (or rank x rank) form.
inline std::vector<ProjectivePoint> imp_trace_points(const GalleryScene& s) {
  std::vector<ProjectivePoint> out;
  const int r = s.p.rank();
  if (r != 2) return out;
  const Matrix& B = s.p.image_basis;
  Matrix A(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      A(i, j) = inner(s.ip, B.col(i), s.g0.op() * B.col(j));
  // a u1^2 + 2b u1 u2 + c u2^2 = 0
  const double a = A(0, 0), b = A(0, 1), c = A(1, 1);
  auto push = [&](double u1, double u2) {
    Vector v = u1 * B.col(0) + u2 * B.col(1);
    if (v.cwiseAbs().maxCoeff() > 1e-12) out.emplace_back(v);
  };
  if (std::abs(a) < 1e-14 * std::max({std::abs(b), std::abs(c), 1e-300})) {
    push(1, 0);
    if (std::abs(b) > 1e-14) push(-c / (2 * b), 1);
    return out;
  }
  const double disc = b * b - a * c;
  if (disc < 0) return out;
  const double sq = std::sqrt(disc);
  push((-b + sq) / a, 1);
  if (sq > 1e-14) push((-b - sq) / a, 1);
  return out;
}

inline bool is_isotropic(const InnerProduct& ip, const ProjectivePoint& x) {
  const double n = inner(ip, x.coords(), x.coords());
  return std::abs(n) <= 1e-10 * x.coords().squaredNorm() * ip.gram().norm();
}

}  // namespace detail

inline Report run_suite(const SceneConfig& cfg) {
  const NumericPolicy policy = policy_from_config(cfg);
  const GalleryScene scene = build_scene(cfg, policy);
  Report report;
  report.scene = scene.name;
  report.seed = cfg.seed;
  report.tolerances = cfg.tolerances;

  auto tol = [&](const char* name, double fallback) {
    auto it = cfg.tolerances.find(name);
    return it == cfg.tolerances.end() ? fallback : it->second;
  };
  auto add = [&](const std::string& name, double residual, double threshold,
                 const std::string& note = "") {
    report.checks.push_back(
        {name, residual, threshold, residual <= threshold, note});
  };
  auto add_error = [&](const std::string& name, double threshold,
                       const std::string& what) {
    report.checks.push_back({name, -1.0, threshold, false, what});
  };
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };

  // 1. p-quadric predicate
  const double pq_tol = tol("p_quadric", 1e-10);
  add("p_quadric", detail::p_quadric_residual(scene.g0, scene.p), pq_tol);

  // 2-3. pencil construction, singular parameters, type components
  std::optional<ProjectionPencil> pencil;
  try {
    pencil.emplace(scene.ip, scene.p, scene.g0, policy);
    add("pencil_construction", 0.0, 1.0,
        "members g_t^-1 = g0^-1 - t p");
    double worst_det = 0.0;
    for (double sp : pencil->singular_parameters()) {
      const Matrix M = pencil->base_inv() - sp * scene.p.map;
      const double scale =
          std::pow(std::max(1.0, M.cwiseAbs().maxCoeff()), M.rows());
      worst_det = std::max(worst_det, std::abs(M.determinant()) / scale);
    }
    add("singular_parameters", worst_det, tol("singular_parameters", 1e-8),
        "count=" + std::to_string(pencil->singular_parameters().size()));
    const auto comps = pencil->type_components();
    add("type_components", 0.0, 1.0,
        "intervals=" + std::to_string(comps.size()));
  } catch (const Error& e) {
    add_error("pencil_construction", 1.0, e.what());
  }

  // 4. connecting-map identity
  std::optional<IvoryFamily> family;
  try {
    family.emplace(scene.ip, scene.p, scene.g0, policy);
    add("connecting_map_identity",
        lemma7_identity_check(scene.ip, scene.p, family->connecting_map(),
                              policy),
        tol("connecting_map_identity", 1e-9));
  } catch (const Error& e) {
    add_error("family_construction", 1.0, e.what());
  }

  if (family && pencil) {
    const Matrix I = Matrix::Identity(scene.ip.dim(), scene.ip.dim());
    // 5. sandwich identity on the lambda grid
    double worst_sandwich = 0.0;
    for (double lambda : cfg.lambda_grid) {
      try {
        const Matrix ginv = family->g_lambda_operator(lambda).inverse();
        const Matrix lp = family->l_prime(lambda);
        const Matrix base_inv = family->base_op().inverse();
        const double r1 =
            (ginv - lp * base_inv * lp).norm() / std::max(1.0, ginv.norm());
        const double r2 = (ginv - (base_inv - lambda * scene.p.map)).norm() /
                          std::max(1.0, ginv.norm());
        worst_sandwich = std::max(worst_sandwich, std::max(r1, r2));
      } catch (const Error& e) {
        add_error("sandwich_identity[lambda=" + fmt(lambda) + "]",
                  tol("sandwich_identity", 1e-9), e.what());
      }
    }
    add("sandwich_identity", worst_sandwich, tol("sandwich_identity", 1e-9));

    // 6. Ivory delta on the base trace
    std::vector<ProjectivePoint> pts;
    if (scene.p.is_identity()) {
      for (auto& q : sample_points(family->pencil().base(), 64, {}, policy))
        if (!detail::is_isotropic(scene.ip, q)) pts.push_back(q);
    } else {
      pts = detail::imp_trace_points(scene);
      pts.erase(std::remove_if(pts.begin(), pts.end(),
                               [&](const ProjectivePoint& q) {
                                 return detail::is_isotropic(scene.ip, q);
                               }),
                pts.end());
    }
    if (pts.size() < 2) {
      add("ivory_delta", 0.0, tol("ivory_delta", 1e-9),
          "no non-isotropic real points of the base inside Im p; nothing to "
          "check");
    } else {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
      double worst = 0.0;
      for (double lambda : cfg.lambda_grid) {
        try {
          for (int k = 0; k < 100; ++k) {
            const std::size_t i = pick(rng);
            const std::size_t j = pick(rng);
            worst = std::max(
                worst, family->verify_ivory_delta(lambda, pts[i], pts[j]));
          }
        } catch (const Error& e) {
          add_error("ivory_delta[lambda=" + fmt(lambda) + "]",
                    tol("ivory_delta", 1e-9), e.what());
        }
      }
      add("ivory_delta", worst, tol("ivory_delta", 1e-9),
          "pairs from " + std::to_string(pts.size()) + " trace points");
    }

    // 7. affine diagonal equality (rank-deficient p scenes only)
    if (!scene.p.is_identity() && scene.ip.dim() == 3) {
      auto chart_pts = sample_points(family->pencil().base(), 48, {}, policy);
      if (chart_pts.size() < 2) {
        add("ivory_affine", 0.0, tol("ivory_affine", 1e-8),
            "empty real trace in the affine chart");
      } else {
        std::mt19937_64 rng(cfg.seed + 1);
        std::uniform_int_distribution<std::size_t> pick(0,
                                                        chart_pts.size() - 1);
        double worst = 0.0;
        for (double lambda : cfg.lambda_grid) {
          try {
            for (int k = 0; k < 50; ++k) {
              const std::size_t i = pick(rng);
              const std::size_t j = pick(rng);
              worst = std::max(worst,
                               family->verify_ivory_affine(
                                   lambda, chart_pts[i], chart_pts[j]));
            }
          } catch (const ChartFailure&) {
            // a sampled point may sit on the ideal line; skip the pair
          } catch (const Error& e) {
            add_error("ivory_affine[lambda=" + fmt(lambda) + "]",
                      tol("ivory_affine", 1e-8), e.what());
          }
        }
        add("ivory_affine", worst, tol("ivory_affine", 1e-8));
      }
    }

    // 8. path derivative at grid midpoints, u in Im p
    {
      Vector u = scene.p.image_basis.col(0);
      if (scene.p.rank() > 1) u += 0.3 * scene.p.image_basis.col(1);
      double worst = 0.0;
      const double h = policy.fd_step;
      for (double lambda : cfg.lambda_grid) {
        try {
          worst = std::max(worst, family->path_derivative_check(lambda, u, h));
        } catch (const Error& e) {
          add_error("path_derivative[lambda=" + fmt(lambda) + "]",
                    tol("path_derivative", 1e-5), e.what());
        }
      }
      add("path_derivative", worst, tol("path_derivative", 1e-5));
    }

    // 9. psi invariance: pick transversal members with real intersections
    {
      std::vector<double> mus;
      const auto comps = family->pencil().type_components();
      for (const auto& comp : comps) {
        const double lo = std::isinf(comp.lo) ? comp.hi - 2.0 : comp.lo;
        const double hi = std::isinf(comp.hi) ? comp.lo + 2.0 : comp.hi;
        if (std::isinf(comp.lo) && std::isinf(comp.hi)) continue;
        for (double f : {0.5, 0.25, 0.75}) {
          const double mu = lo + (hi - lo) * f;
          if (std::abs(mu) < 1e-9) continue;
          if (family->pencil().is_singular_parameter(mu)) continue;
          mus.push_back(mu);
        }
      }
      std::vector<double> grid;
      for (double lambda : cfg.lambda_grid)
        if (family->in_domain(lambda)) grid.push_back(lambda);
      if (grid.empty()) grid.push_back(0.0);
      double worst = 0.0;
      int checked = 0;
      for (double mu : mus) {
        if (scene.ip.dim() != 3) break;
        try {
          auto isects = intersect_conics(family->pencil().base(),
                                         family->pencil().member(mu).quadric,
                                         policy);
          if (isects.empty()) continue;
          worst = std::max(worst, family->psi_invariance_check(
                                      mu, grid, isects.front().point));
          ++checked;
        } catch (const Error& e) {
          add_error("psi_invariance[mu=" + fmt(mu) + "]",
                    tol("psi_invariance", 1e-9), e.what());
        }
      }
      if (checked == 0)
        add("psi_invariance", 0.0, tol("psi_invariance", 1e-9),
            "no transversal member with real intersections");
      else
        add("psi_invariance", worst, tol("psi_invariance", 1e-9),
            "members checked=" + std::to_string(checked));
    }
  }

  return report;
}

/// Curve sampling for emit_family: chart points of one member, grouped into
/// polyline branches by chart continuity.
struct FamilyCurve {
  double t;
  std::vector<std::vector<std::pair<double, double>>> branches;
};

namespace detail {

inline std::vector<std::vector<std::pair<double, double>>> branch_points(
    const std::vector<ProjectivePoint>& pts) {
  // points arrive in sweep order; split where the chart jump is large
  std::vector<std::pair<double, double>> chart;
  for (const auto& p : pts) {
    const Vector& v = p.coords();
    if (std::abs(v[2]) < 1e-9) continue;
    chart.emplace_back(v[0] / v[2], v[1] / v[2]);
  }
  std::vector<std::vector<std::pair<double, double>>> branches;
  for (const auto& q : chart) {
    if (branches.empty() ||
        std::hypot(q.first - branches.back().back().first,
                   q.second - branches.back().back().second) > 0.75) {
      branches.push_back({q});
    } else {
      branches.back().push_back(q);
    }
  }
  return branches;
}

}  // namespace detail

struct FamilyEmission {
  std::vector<double> singular_parameters;
  std::vector<FamilyCurve> curves;
  std::vector<ConicIntersection> quadrangle;
  std::vector<std::pair<std::string, double>> diagonals;  // label, rho^2
};

inline FamilyEmission compute_family_emission(const SceneConfig& cfg,
                                              const std::vector<double>& ts) {
  const NumericPolicy policy = policy_from_config(cfg);
  const GalleryScene scene = build_scene(cfg, policy);
  if (scene.ip.dim() != 3)
    throw UnsupportedDimension("family emission supports only plane scenes");
  ProjectionPencil pencil(scene.ip, scene.p, scene.g0, policy);
  FamilyEmission out;
  out.singular_parameters = pencil.singular_parameters();
  for (double t : ts) {
    FamilyCurve curve{t, {}};
    if (!pencil.is_singular_parameter(t)) {
      auto pts = sample_points(pencil.member(t).quadric, 720, {}, policy);
      curve.branches = detail::branch_points(pts);
    }
    out.curves.push_back(std::move(curve));
  }
  if (cfg.quadrangle_ts.size() == 2) {
    const auto a = pencil.member(cfg.quadrangle_ts[0]).quadric;
    const auto b = pencil.member(cfg.quadrangle_ts[1]).quadric;
    out.quadrangle = intersect_conics(a, b, policy);
    for (std::size_t i = 0; i + 1 < out.quadrangle.size(); i += 2) {
      const Vector& pa = out.quadrangle[i].point.coords();
      const Vector& pb = out.quadrangle[i + 1].point.coords();
      if (std::abs(pa[2]) < 1e-9 || std::abs(pb[2]) < 1e-9) continue;
      const Vector d = pa / pa[2] - pb / pb[2];
      out.diagonals.emplace_back(
          "d" + std::to_string(i / 2), inner(scene.ip, d, d));
    }
  }
  return out;
}

inline std::string emit_family_csv(const FamilyEmission& em) {
  std::ostringstream os;
  os << "t,branch,x,y\n";
  for (const auto& c : em.curves)
    for (std::size_t b = 0; b < c.branches.size(); ++b)
      for (const auto& [x, y] : c.branches[b])
        os << c.t << ',' << b << ',' << x << ',' << y << '\n';
  return os.str();
}

inline ordered_json emit_family_json(const FamilyEmission& em) {
  ordered_json out;
  out["singular_parameters"] = em.singular_parameters;
  ordered_json curves = ordered_json::array();
  for (const auto& c : em.curves) {
    ordered_json branches = ordered_json::array();
    for (const auto& branch : c.branches) {
      ordered_json poly = ordered_json::array();
      for (const auto& [x, y] : branch) poly.push_back({x, y});
      branches.push_back(poly);
    }
    curves.push_back({{"t", c.t}, {"branches", branches}});
  }
  out["curves"] = curves;
  if (!em.quadrangle.empty()) {
    ordered_json quad = ordered_json::array();
    for (const auto& q : em.quadrangle) {
      const Vector& v = q.point.coords();
      quad.push_back({{"point", {v[0], v[1], v[2]}},
                      {"multiplicity", q.multiplicity}});
    }
    out["quadrangle"] = quad;
    ordered_json diags = ordered_json::object();
    for (const auto& [label, rho2] : em.diagonals) diags[label] = rho2;
    out["diagonals_rho2"] = diags;
  }
  return out;
}

inline std::string emit_family_svg(const FamilyEmission& em) {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool any = false;
  for (const auto& c : em.curves)
    for (const auto& branch : c.branches)
      for (const auto& [x, y] : branch) {
        if (!any) {
          xmin = xmax = x;
          ymin = ymax = y;
          any = true;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
  if (!any) {
    xmin = ymin = -1;
    xmax = ymax = 1;
  }
  const double mx = 0.1 * std::max(xmax - xmin, 1e-6);
  const double my = 0.1 * std::max(ymax - ymin, 1e-6);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
     << xmin - mx << ' ' << -(ymax + my) << ' ' << (xmax - xmin) + 2 * mx
     << ' ' << (ymax - ymin) + 2 * my << "\">\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};
  int ci = 0;
  for (const auto& c : em.curves) {
    const char* color = colors[ci++ % 6];
    for (const auto& branch : c.branches) {
      os << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"0.01\" points=\"";
      for (const auto& [x, y] : branch) os << x << ',' << -y << ' ';
      os << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i + 1 < em.quadrangle.size(); i += 2) {
    const Vector a = em.quadrangle[i].point.coords() /
                     em.quadrangle[i].point.coords()[2];
    const Vector b = em.quadrangle[i + 1].point.coords() /
                     em.quadrangle[i + 1].point.coords()[2];
    os << "<line stroke=\"#333\" stroke-width=\"0.01\" x1=\"" << a[0]
       << "\" y1=\"" << -a[1] << "\" x2=\"" << b[0] << "\" y2=\"" << -b[1]
       << "\"/>\n";
    if (i / 2 < em.diagonals.size())
      os << "<text font-size=\"0.1\" x=\"" << (a[0] + b[0]) / 2 << "\" y=\""
         << -(a[1] + b[1]) / 2 << "\">rho2=" << em.diagonals[i / 2].second
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ivory

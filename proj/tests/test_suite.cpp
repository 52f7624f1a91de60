#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ivory/suite.hpp"

using namespace ivory;

namespace {

ordered_json parse(const char* text) { return ordered_json::parse(text); }

const char* kMinkowskiDoc = R"({
  "scene": "minkowski",
  "parameters": { "sigma": 2.0, "tau": 1.0 },
  "lambda_grid": [-0.5, 0.25, 0.75, 1.5],
  "seed": 11
})";

}  // namespace

TEST_CASE("load_config parses a full document") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  CHECK(cfg.scene == "minkowski");
  CHECK(cfg.parameters.at("sigma") == doctest::Approx(2.0));
  CHECK(cfg.parameters.at("tau") == doctest::Approx(1.0));
  REQUIRE(cfg.lambda_grid.size() == 4);
  CHECK(cfg.lambda_grid[0] == doctest::Approx(-0.5));
  CHECK(cfg.seed == 11);
  CHECK(cfg.tolerances.empty());
}

TEST_CASE("load_config defaults") {
  SceneConfig cfg = load_config(parse(R"({"scene": "euclidean"})"));
  CHECK(cfg.seed == 0);
  CHECK(cfg.lambda_grid.size() == 5);
  CHECK(cfg.parameters.empty());
}

TEST_CASE("load_config diagnostics") {
  CHECK_THROWS_AS(load_config(parse("[1,2]")), ConfigError);
  CHECK_THROWS_AS(load_config(parse("{}")), ConfigError);
  CHECK_THROWS_AS(load_config(parse(R"({"scene": 3})")), ConfigError);
  CHECK_THROWS_AS(load_config(parse(R"({"scene": {"H": [[1]], "P": [[1]]}})")),
                  ConfigError);  // custom scene missing G0
  CHECK_THROWS_AS(
      load_config(parse(R"({"scene": {"H": [[1, 2]], "P": [[1]], "G0": [[1]]}})")),
      ConfigError);  // ragged matrix
  CHECK_THROWS_AS(
      load_config(parse(R"({"scene": {"H": [["x"]], "P": [[1]], "G0": [[1]]}})")),
      ConfigError);  // non-numeric entry
  CHECK_THROWS_AS(load_config(parse(R"({"scene": "m", "lambda_grid": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(load_config(parse(R"({"scene": "m", "lambda_grid": ["a"]})")),
                  ConfigError);
  CHECK_THROWS_AS(load_config(parse(R"({"scene": "m", "seed": "zero"})")),
                  ConfigError);
  CHECK_THROWS_AS(load_config(parse(R"({"scene": "m", "tolerances": [1]})")),
                  ConfigError);
  CHECK_THROWS_AS(
      load_config(parse(R"({"scene": "m", "parameters": {"c": "big"}})")),
      ConfigError);
  CHECK_THROWS_AS(
      load_config(parse(R"({"scene": "m", "quadrangles": [1, 2, 3]})")),
      ConfigError);
}

TEST_CASE("load_config_file") {
  SceneConfig cfg = load_config_file(std::string(TEST_DATA_DIR) +
                                     "/minkowski.json");
  CHECK(cfg.scene == "minkowski");
  CHECK(cfg.seed == 7);
  REQUIRE(cfg.quadrangle_ts.size() == 2);
  CHECK(cfg.quadrangle_ts[1] == doctest::Approx(1.5));
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("policy_from_config overrides named fields") {
  SceneConfig cfg = load_config(parse(
      R"({"scene": "minkowski", "tolerances": {"fd_step": 0.001,
          "rank_threshold": 1e-8, "unknown_name": 5}})"));
  NumericPolicy policy = policy_from_config(cfg);
  CHECK(policy.fd_step == doctest::Approx(0.001));
  CHECK(policy.rank_threshold == doctest::Approx(1e-8));
  CHECK(policy.sqrt_spectrum_tol == default_policy().sqrt_spectrum_tol);
}

TEST_CASE("build_scene") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  NumericPolicy policy = policy_from_config(cfg);
  GalleryScene scene = build_scene(cfg, policy);
  CHECK(scene.name == "minkowski");
  CHECK(scene.ip.gram()(1, 1) == doctest::Approx(-1.0));

  SceneConfig bad;
  bad.scene = "lorentzian";
  CHECK_THROWS_AS(build_scene(bad, policy), ConfigError);

  // invalid gallery parameters surface as configuration errors
  SceneConfig degenerate = load_config(
      parse(R"({"scene": "euclidean", "parameters": {"c": 0.0}})"));
  CHECK_THROWS_AS(build_scene(degenerate, policy), ConfigError);
}

TEST_CASE("build_scene custom matrices") {
  SceneConfig cfg = load_config(parse(R"({
    "scene": {
      "H":  [[1, 0, 0], [0, -1, 0], [0, 0, 1]],
      "P":  [[1, 0, 0], [0, 1, 0], [0, 0, 0]],
      "G0": [[0.5, 0, 0], [0, -1, 0], [0, 0, -1]]
    },
    "lambda_grid": [0.25, 0.75]
  })"));
  GalleryScene scene = build_scene(cfg, policy_from_config(cfg));
  CHECK(scene.name == "custom");
  CHECK(scene.p.rank() == 2);
  Report report = run_suite(cfg);
  CHECK(report.overall_pass());

  // a non-idempotent P is rejected
  SceneConfig bad = cfg;
  bad.custom_P = 2.0 * *cfg.custom_P;
  CHECK_THROWS_AS(build_scene(bad, policy_from_config(bad)), ConfigError);
}

TEST_CASE("run_suite passes on the minkowski scene") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  Report report = run_suite(cfg);
  CHECK(report.overall_pass());
  CHECK(report.scene == "minkowski");
  CHECK(report.seed == 11);

  auto find = [&](const std::string& name) -> const CheckRecord* {
    for (const auto& c : report.checks)
      if (c.name == name) return &c;
    return nullptr;
  };
  for (const char* name :
       {"p_quadric", "pencil_construction", "singular_parameters",
        "type_components", "connecting_map_identity", "sandwich_identity",
        "ivory_delta", "ivory_affine", "path_derivative", "psi_invariance"}) {
    const CheckRecord* rec = find(name);
    REQUIRE_MESSAGE(rec != nullptr, name);
    CHECK_MESSAGE(rec->pass, name);
  }

  ordered_json j = report.to_json();
  CHECK(j["summary"]["overall_pass"] == true);
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["reproducibility"]["seed"] == 11);
  CHECK(j["scene"] == "minkowski");
}

TEST_CASE("run_suite is deterministic for a fixed seed") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  const std::string a = run_suite(cfg).to_json().dump();
  const std::string b = run_suite(cfg).to_json().dump();
  CHECK(a == b);
}

TEST_CASE("run_suite records out-of-domain grid points as failures") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  cfg.lambda_grid = {0.5, 5.0};  // 5 is outside the sqrt domain (-1, 2)
  Report report = run_suite(cfg);
  CHECK_FALSE(report.overall_pass());
  bool found = false;
  for (const auto& c : report.checks)
    if (c.name == "sandwich_identity[lambda=5]") {
      found = true;
      CHECK_FALSE(c.pass);
      CHECK(!c.note.empty());
    }
  CHECK(found);
}

TEST_CASE("run_suite respects check-threshold overrides") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  cfg.tolerances["sandwich_identity"] = 1e-300;  // unreachably strict
  Report report = run_suite(cfg);
  bool found = false;
  for (const auto& c : report.checks)
    if (c.name == "sandwich_identity") {
      found = true;
      CHECK(c.threshold == doctest::Approx(1e-300));
      CHECK_FALSE(c.pass);
    }
  CHECK(found);
  CHECK_FALSE(report.overall_pass());
}

TEST_CASE("family emission") {
  SceneConfig cfg = load_config_file(std::string(TEST_DATA_DIR) +
                                     "/minkowski.json");
  FamilyEmission em = compute_family_emission(cfg, {0.5, 1.5});
  REQUIRE(em.singular_parameters.size() == 2);
  CHECK(em.singular_parameters[0] == doctest::Approx(-1.0));
  CHECK(em.singular_parameters[1] == doctest::Approx(2.0));
  REQUIRE(em.curves.size() == 2);
  CHECK(!em.curves[0].branches.empty());
  CHECK(!em.curves[0].branches[0].empty());
  // the two members of the quadrangle pair really intersect in four points
  CHECK(em.quadrangle.size() == 4);
  CHECK(em.diagonals.size() == 2);

  const std::string csv = emit_family_csv(em);
  CHECK(csv.rfind("t,branch,x,y\n", 0) == 0);
  CHECK(csv.find("0.5,") != std::string::npos);

  ordered_json j = emit_family_json(em);
  CHECK(j["curves"].size() == 2);
  CHECK(j.contains("quadrangle"));
  CHECK(j.contains("diagonals_rho2"));

  const std::string svg = emit_family_svg(em);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
}

TEST_CASE("family emission skips singular parameters") {
  SceneConfig cfg = load_config(parse(kMinkowskiDoc));
  cfg.quadrangle_ts.clear();
  FamilyEmission em = compute_family_emission(cfg, {2.0});
  REQUIRE(em.curves.size() == 1);
  CHECK(em.curves[0].branches.empty());
}

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivory/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

void apply_overrides(ivory::SceneConfig& cfg,
                     const std::vector<std::string>& tol_args,
                     const std::optional<std::uint64_t>& seed) {
  for (const std::string& arg : tol_args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ivory::ConfigError("--tol expects name=value, got '" + arg + "'");
    const std::string name = arg.substr(0, eq);
    try {
      cfg.tolerances[name] = std::stod(arg.substr(eq + 1));
    } catch (const std::exception&) {
      throw ivory::ConfigError("--tol value for '" + name +
                               "' is not a number");
    }
  }
  if (seed) cfg.seed = *seed;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ivory::IOFailure("cannot open output file '" + out_path + "'");
  out << text;
  if (!out) throw ivory::IOFailure("write to '" + out_path + "' failed");
}

ivory::ordered_json interval_json(const ivory::TypeInterval& iv) {
  ivory::ordered_json j;
  j["lo"] = std::isinf(iv.lo) ? ivory::ordered_json(nullptr)
                              : ivory::ordered_json(iv.lo);
  j["hi"] = std::isinf(iv.hi) ? ivory::ordered_json(nullptr)
                              : ivory::ordered_json(iv.hi);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection pencils of quadrics over indefinite inner products"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::vector<std::string> tol_args;
  std::optional<std::uint64_t> seed;
  std::vector<double> t_list;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON scene configuration")
        ->required();
    sub->add_option("--tol", tol_args,
                    "numeric-policy or check-threshold override, name=value");
    sub->add_option("--seed", seed, "64-bit seed for sampled checks");
    sub->add_option("--out", out_path, "write output to a file instead of stdout");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify);
  CLI::App* family = app.add_subcommand("family", "emit sampled member curves");
  add_common(family);
  family->add_option("--t", t_list, "member parameters to sample")
      ->delimiter(',');
  family->add_option("--format", format, "csv, svg or json")
      ->check(CLI::IsMember({"csv", "svg", "json"}));
  CLI::App* info = app.add_subcommand(
      "info", "singular parameters, type intervals and the domain margin");
  add_common(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    ivory::SceneConfig cfg = ivory::load_config_file(config_path);
    apply_overrides(cfg, tol_args, seed);

    if (verify->parsed()) {
      const ivory::Report report = ivory::run_suite(cfg);
      write_output(report.to_json().dump(2) + "\n", out_path);
      return report.overall_pass() ? kExitPass : kExitViolation;
    }

    if (family->parsed()) {
      const ivory::FamilyEmission em =
          ivory::compute_family_emission(cfg, t_list);
      if (format == "csv")
        write_output(ivory::emit_family_csv(em), out_path);
      else if (format == "json")
        write_output(ivory::emit_family_json(em).dump(2) + "\n", out_path);
      else
        write_output(ivory::emit_family_svg(em), out_path);
      return kExitPass;
    }

    // info
    const ivory::NumericPolicy policy = ivory::policy_from_config(cfg);
    const ivory::GalleryScene scene = ivory::build_scene(cfg, policy);
    ivory::ordered_json out;
    out["scene"] = scene.name;
    ivory::ProjectionPencil pencil(scene.ip, scene.p, scene.g0, policy);
    out["singular_parameters"] = pencil.singular_parameters();
    ivory::ordered_json intervals = ivory::ordered_json::array();
    for (const auto& iv : pencil.type_components())
      intervals.push_back(interval_json(iv));
    out["type_intervals"] = intervals;
    try {
      ivory::IvoryFamily fam(scene.ip, scene.p, scene.g0, policy);
      ivory::ordered_json dom;
      const auto [lo, hi] = fam.domain();
      dom["lo"] = std::isinf(lo) ? ivory::ordered_json(nullptr)
                                 : ivory::ordered_json(lo);
      dom["hi"] = std::isinf(hi) ? ivory::ordered_json(nullptr)
                                 : ivory::ordered_json(hi);
      out["sqrt_domain"] = dom;
      const double margin = fam.domain_margin();
      out["sqrt_domain_margin"] =
          std::isinf(margin) ? ivory::ordered_json(nullptr)
                             : ivory::ordered_json(margin);
    } catch (const ivory::Error& e) {
      out["family_error"] = e.what();
    }
    write_output(out.dump(2) + "\n", out_path);
    return kExitPass;
  } catch (const ivory::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ivory::IOFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ivory::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

// Command-line pipeline: construct a network-realizing vector field, verify
// it against its graph, analyze two-node cycle stability, and export
// nullcline figures. Subcommands: build, verify, stability, plot, all.
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 numerical failure.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hetnet/construct.hpp"
#include "hetnet/dynamics.hpp"
#include "hetnet/graph.hpp"
#include "hetnet/io_util.hpp"
#include "hetnet/nullclines.hpp"
#include "hetnet/stability.hpp"
#include "hetnet/verify.hpp"

namespace {

using namespace hetnet;

struct RunConfig {
  int n = 0;
  std::string mode = "auto";      // explicit | general | auto
  std::string epsilon = "auto";   // real literal or "auto"
  double kappa = 0.01;            // axis/connection scale-separation bound
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double delta = 1e-3;
  double eta = 1e-2;
  double t_max = 1e4;
  std::string out = "out";
  std::uint64_t seed = 1;
  int plane = 0;  // 0 = all planes
};

void validate(const RunConfig& cfg) {
  if (cfg.n < 3) throw std::invalid_argument("n must be at least 3");
  if (cfg.mode != "auto" && cfg.mode != "explicit" && cfg.mode != "general")
    throw std::invalid_argument("mode must be explicit, general, or auto");
  if (cfg.rel_tol <= 0.0 || cfg.abs_tol <= 0.0 || cfg.delta <= 0.0 || cfg.eta <= 0.0 ||
      cfg.t_max <= 0.0)
    throw std::invalid_argument("all tolerances must be positive");
}

VectorFieldSpec make_spec(const RunConfig& cfg) {
  std::string mode = cfg.mode;
  if (mode == "auto") mode = cfg.n <= 6 ? "explicit" : "general";

  double eps = 0.0;
  bool auto_eps = cfg.epsilon == "auto";
  if (!auto_eps) {
    std::size_t used = 0;
    try {
      eps = std::stod(cfg.epsilon, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("epsilon must be a real number or \"auto\"");
    }
    if (used != cfg.epsilon.size())
      throw std::invalid_argument("epsilon must be a real number or \"auto\"");
  }

  VectorFieldSpec spec = mode == "explicit" ? build_explicit(cfg.n, auto_eps ? 1e-2 : eps)
                                            : build_general(cfg.n, auto_eps ? 1e-2 : eps);
  if (auto_eps) spec.epsilon = calibrate_epsilon(spec, cfg.kappa);
  return spec;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::string dir = cfg.out.empty() ? "." : cfg.out;
  return dir + "/" + name;
}

void ensure_out_dir(const RunConfig& cfg) {
  if (cfg.out.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + cfg.out);
}

nlohmann::json config_json(const RunConfig& cfg, const VectorFieldSpec& spec) {
  return {{"n", cfg.n},
          {"mode", spec.mode},
          {"epsilon", spec.epsilon},
          {"kappa", cfg.kappa},
          {"rel_tol", cfg.rel_tol},
          {"abs_tol", cfg.abs_tol},
          {"delta", cfg.delta},
          {"eta", cfg.eta},
          {"t_max", cfg.t_max},
          {"seed", cfg.seed}};
}

VerifyParams verify_params(const RunConfig& cfg) {
  VerifyParams p;
  p.delta = cfg.delta;
  p.eta = cfg.eta;
  p.t_max = cfg.t_max;
  p.rel_tol = cfg.rel_tol;
  p.abs_tol = cfg.abs_tol;
  return p;
}

int cmd_build(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const VectorFieldSpec spec = make_spec(cfg);
  const std::string tag = "n" + std::to_string(cfg.n);
  const std::string spec_file = out_path(cfg, "spec_" + tag + ".json");
  const std::string eq_file = out_path(cfg, "equations_" + tag + ".txt");
  write_file_atomic(spec_file, dump_json17(to_json(spec)));
  write_file_atomic(eq_file, equation_text(spec));
  std::printf("built %s field: n = %d, %zu planes, epsilon = %s\n", spec.mode.c_str(), spec.n,
              spec.planes.size(), format_sig(spec.epsilon, 6).c_str());
  std::printf("wrote %s\nwrote %s\n", spec_file.c_str(), eq_file.c_str());
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const VectorFieldSpec spec = make_spec(cfg);
  const DNNGraph graph = build_graph(cfg.n);

  RealizationReport report = verify_realization(spec, graph, verify_params(cfg));

  // derivative self-check: probe points flow from the one seeded generator
  const int fd_points = 20;
  const double fd_err = jacobian_fd_max_error(spec, fd_points, cfg.seed);

  nlohmann::json j = to_json(report);
  j["jacobian_fd"] = {{"points", fd_points},
                      {"seed", cfg.seed},
                      {"max_scaled_error", fd_err},
                      {"ok", fd_err < 1e-6}};
  const std::string file = out_path(cfg, "verify_n" + std::to_string(cfg.n) + ".json");
  write_file_atomic(file, dump_json17(j));

  int verified = 0;
  for (const ConnectionReport& c : report.connections)
    if (c.verdict == "verified") ++verified;
  std::printf("connections verified: %d/%zu\n", verified, report.connections.size());
  std::printf("axis equilibria: %d (max integer deviation %s)\n", report.axis_count,
              format_sig(report.axis_max_deviation, 3).c_str());
  std::printf("sign patterns: %s\n", report.signs.ok ? "ok" : "violated");
  std::printf("overall: %s\n", report.overall ? "verified" : "failed");
  for (const std::string& cause : report.causes) std::fprintf(stderr, "%s\n", cause.c_str());
  std::printf("wrote %s\n", file.c_str());
  return report.overall ? 0 : 1;
}

int cmd_stability(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const VectorFieldSpec spec = make_spec(cfg);
  const DNNGraph graph = build_graph(cfg.n);
  const std::vector<CycleAnalysis> cycles = analyze_network_cycles(spec, graph);

  const std::string file = out_path(cfg, "stability_n" + std::to_string(cfg.n) + ".json");
  write_file_atomic(file, dump_json17(cycles_to_json(cycles)));

  std::printf("two-node cycles: %zu\n", cycles.size());
  for (const CycleAnalysis& c : cycles)
    std::printf("  cycle (%d, %d): %s\n", c.node_a, c.node_b, cycle_verdict_name(c.verdict));
  std::printf("wrote %s\n", file.c_str());
  return 0;
}

int cmd_plot(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const VectorFieldSpec spec = make_spec(cfg);
  const int planes = static_cast<int>(spec.planes.size());
  if (cfg.plane < 0 || cfg.plane > planes)
    throw std::invalid_argument("plane must lie in 1.." + std::to_string(planes) +
                                " (or 0 for all)");
  std::vector<int> wanted;
  if (cfg.plane == 0)
    for (int j = 1; j <= planes; ++j) wanted.push_back(j);
  else
    wanted.push_back(cfg.plane);

  for (int j : wanted) {
    const std::vector<NullclineCurve> curves =
        sample_nullclines(spec, j, 256, NullclineMode::EpsZero);
    const std::string stem =
        "nullclines_n" + std::to_string(cfg.n) + "_plane" + std::to_string(j);
    const std::string csv_file = out_path(cfg, stem + ".csv");
    const std::string svg_file = out_path(cfg, stem + ".svg");
    write_file_atomic(csv_file, nullclines_csv(curves));
    write_file_atomic(svg_file, nullclines_svg(spec, curves, j));
    std::printf("wrote %s\nwrote %s\n", csv_file.c_str(), svg_file.c_str());
  }
  return 0;
}

int cmd_all(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const VectorFieldSpec spec = make_spec(cfg);
  const DNNGraph graph = build_graph(cfg.n);
  const std::string tag = "n" + std::to_string(cfg.n);

  write_file_atomic(out_path(cfg, "spec_" + tag + ".json"), dump_json17(to_json(spec)));
  write_file_atomic(out_path(cfg, "equations_" + tag + ".txt"), equation_text(spec));

  RealizationReport report = verify_realization(spec, graph, verify_params(cfg));
  const int fd_points = 20;
  const double fd_err = jacobian_fd_max_error(spec, fd_points, cfg.seed);
  nlohmann::json verify_json = to_json(report);
  verify_json["jacobian_fd"] = {{"points", fd_points},
                                {"seed", cfg.seed},
                                {"max_scaled_error", fd_err},
                                {"ok", fd_err < 1e-6}};
  write_file_atomic(out_path(cfg, "verify_" + tag + ".json"), dump_json17(verify_json));

  const std::vector<CycleAnalysis> cycles = analyze_network_cycles(spec, graph);
  write_file_atomic(out_path(cfg, "stability_" + tag + ".json"),
                    dump_json17(cycles_to_json(cycles)));

  for (int j = 1; j <= static_cast<int>(spec.planes.size()); ++j) {
    const std::vector<NullclineCurve> curves =
        sample_nullclines(spec, j, 256, NullclineMode::EpsZero);
    const std::string stem = "nullclines_" + tag + "_plane" + std::to_string(j);
    write_file_atomic(out_path(cfg, stem + ".csv"), nullclines_csv(curves));
    write_file_atomic(out_path(cfg, stem + ".svg"), nullclines_svg(spec, curves, j));
  }

  nlohmann::json combined;
  combined["config"] = config_json(cfg, spec);
  combined["spec"] = to_json(spec);
  combined["verify"] = verify_json;
  combined["stability"] = cycles_to_json(cycles);
  write_file_atomic(out_path(cfg, "report_" + tag + ".json"), dump_json17(combined));

  int verified = 0;
  for (const ConnectionReport& c : report.connections)
    if (c.verdict == "verified") ++verified;
  std::printf("n = %d (%s, epsilon = %s): %d/%zu connections verified, %zu cycles, overall %s\n",
              cfg.n, spec.mode.c_str(), format_sig(spec.epsilon, 6).c_str(), verified,
              report.connections.size(), cycles.size(), report.overall ? "verified" : "failed");
  for (const std::string& cause : report.causes) std::fprintf(stderr, "%s\n", cause.c_str());
  std::printf("wrote %s\n", out_path(cfg, "report_" + tag + ".json").c_str());
  return report.overall ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"polynomial vector fields realizing double-next-neighbour connection networks"};
  app.fallthrough(true);
  app.set_config("--config", "", "key=value configuration file");
  app.add_option("--n", cfg.n, "number of network nodes (>= 3)");
  app.add_option("--mode", cfg.mode, "construction mode: explicit | general | auto");
  app.add_option("--epsilon", cfg.epsilon, "axis term strength (real) or \"auto\"");
  app.add_option("--kappa", cfg.kappa, "calibration bound in (0,1) for auto epsilon");
  app.add_option("--rel-tol", cfg.rel_tol, "integrator relative tolerance");
  app.add_option("--abs-tol", cfg.abs_tol, "integrator absolute tolerance");
  app.add_option("--delta", cfg.delta, "connection start offset");
  app.add_option("--eta", cfg.eta, "target ball radius");
  app.add_option("--t-max", cfg.t_max, "integration time budget per connection");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--seed", cfg.seed, "seed for derivative probe points");
  app.add_option("--plane", cfg.plane, "plane to plot (0 = all)");

  CLI::App* sub_build = app.add_subcommand("build", "construct the field and dump it");
  CLI::App* sub_verify = app.add_subcommand("verify", "integrate and check every connection");
  CLI::App* sub_stability = app.add_subcommand("stability", "classify two-node cycles");
  CLI::App* sub_plot = app.add_subcommand("plot", "export nullcline CSV/SVG per plane");
  CLI::App* sub_all = app.add_subcommand("all", "full pipeline: build, verify, stability, plot");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0; bad flags are invalid input
  }

  try {
    validate(cfg);
    if (sub_build->parsed()) return cmd_build(cfg);
    if (sub_verify->parsed()) return cmd_verify(cfg);
    if (sub_stability->parsed()) return cmd_stability(cfg);
    if (sub_plot->parsed()) return cmd_plot(cfg);
    if (sub_all->parsed()) return cmd_all(cfg);
    std::fprintf(stderr, "no subcommand given\n");
    return 2;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  }
}

// sridge: command-line front end for the sparse ridge solvers.
//
// Exit codes: 0 success, 2 invalid arguments, 3 non-convergence or an
// exceeded cap, 4 I/O failure.

#include "sparse_ridge/bench.hpp"
#include "sparse_ridge/errors.hpp"
#include "sparse_ridge/extensions.hpp"
#include "sparse_ridge/io.hpp"
#include "sparse_ridge/kernels.hpp"
#include "sparse_ridge/methods.hpp"
#include "sparse_ridge/relaxation.hpp"
#include "sparse_ridge/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using sridge::Json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kSolver = 3;
constexpr int kIo = 4;

void emit(const std::string& out, const Json& j) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    sridge::write_json(out, j);
  }
}

struct InputArgs {
  std::string path;
  std::string response_col = "last";
  bool header = true;
  bool normalize = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", path, "Data CSV (features and response)")->required();
    cmd->add_option("--response-col", response_col, "Response column: last, a 0-based index or a header name");
    cmd->add_flag("--header,!--no-header", header, "First CSV row is a header (default on)");
    cmd->add_flag("--normalize", normalize, "Rescale each column to squared norm n");
  }

  std::shared_ptr<const sridge::Dataset> load() const {
    sridge::Dataset d = sridge::read_dataset_csv(path, {header, response_col});
    if (normalize) d = d.normalized();
    return std::make_shared<const sridge::Dataset>(std::move(d));
  }

  Json config() const {
    return Json{{"input", path}, {"response_col", response_col}, {"header", header}, {"normalize", normalize}};
  }
};

void attach_solver(CLI::App* cmd, sridge::SolverConfig& c) {
  cmd->add_option("--method", c.method, "greedy|restricted|randomized|heuristic|brute|bnb")
      ->check(CLI::IsMember(sridge::solver_names()));
  cmd->add_option("--delta", c.delta, "Restricted greedy threshold on the relaxation");
  cmd->add_option("--trials", c.trials, "Randomized rounding trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_flag("!--no-repair", c.repair, "Keep over-budget randomized draws unrepaired when ranking");
  cmd->add_option("--delta-hat", c.delta_hat, "Bisection tolerance of the heuristic")->check(CLI::PositiveNumber);
  cmd->add_option("--gap-tol", c.gap_tol, "Relative gap tolerance for branch and bound");
  cmd->add_option("--node-cap", c.node_cap, "Node limit for branch and bound");
}

Json feature_names(const sridge::Dataset& d, const sridge::Support& s) {
  Json names = Json::array();
  if (d.feature_names().empty()) return names;
  for (auto i : s) names.push_back(d.feature_names()[static_cast<std::size_t>(i)]);
  return names;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse ridge regression solvers"};
  app.require_subcommand(1);
  std::string out;

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a k-sparse ridge estimator");
  InputArgs fit_in;
  fit_in.attach(fit);
  double fit_lambda = 0.0;
  long fit_k = 0;
  sridge::SolverConfig fit_solver;
  fit->add_option("--lambda", fit_lambda, "Ridge weight")->required();
  fit->add_option("--k", fit_k, "Sparsity budget")->required();
  attach_solver(fit, fit_solver);
  fit->add_option("--out", out, "Output JSON (stdout when omitted)");

  // relax
  auto* relax = app.add_subcommand("relax", "Solve a continuous relaxation");
  InputArgs relax_in;
  relax_in.attach(relax);
  double relax_lambda = 0.0;
  long relax_k = 0;
  std::string which = "v4";
  std::optional<double> vupper;
  relax->add_option("--lambda", relax_lambda, "Ridge weight")->required();
  relax->add_option("--k", relax_k, "Sparsity budget")->required();
  relax->add_option("--which", which, "Relaxation: v1|v2|v3|v4")->check(CLI::IsMember({"v1", "v2", "v3", "v4"}));
  relax->add_option("--vupper", vupper, "Objective upper bound used for the big-M constants");
  relax->add_option("--out", out, "Output JSON (stdout when omitted)");

  // tune
  auto* tune = app.add_subcommand("tune", "Choose lambda on a grid by generalized cross-validation");
  InputArgs tune_in;
  tune_in.attach(tune);
  long tune_k = 0;
  std::vector<double> grid;
  sridge::SolverConfig tune_solver;
  tune->add_option("--k", tune_k, "Sparsity budget")->required();
  tune->add_option("--grid", grid, "Comma-separated lambda values")->required()->delimiter(',');
  attach_solver(tune, tune_solver);
  tune->add_option("--out", out, "Output JSON (stdout when omitted)");

  // precision
  auto* precision = app.add_subcommand("precision", "Sparse precision matrix from a covariance matrix");
  std::string sigma_path;
  bool sigma_header = false;
  double prec_lambda = 0.0;
  long prec_k = 0;
  sridge::SolverConfig prec_solver;
  precision->add_option("--input", sigma_path, "Square covariance CSV")->required();
  precision->add_flag("--header", sigma_header, "Skip a header row");
  precision->add_option("--lambda", prec_lambda, "Ridge weight on ||Omega||_F^2")->required();
  precision->add_option("--k", prec_k, "Nonzero budget for Omega")->required();
  attach_solver(precision, prec_solver);
  precision->add_option("--out", out, "Output JSON (stdout when omitted)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  sridge::SyntheticConfig gen_cfg;
  std::string truth_path;
  bool keep_small = false;
  gen->add_option("--n", gen_cfg.n, "Samples")->required();
  gen->add_option("--p", gen_cfg.p, "Features")->required();
  gen->add_option("--ktrue", gen_cfg.k_true, "Planted nonzeros")->required();
  gen->add_option("--rho", gen_cfg.rho, "AR(1) feature correlation");
  gen->add_option("--snr", gen_cfg.snr, "Signal-to-noise ratio");
  gen->add_option("--coef-low", gen_cfg.coef_low, "Lower end of planted coefficients");
  gen->add_option("--coef-high", gen_cfg.coef_high, "Upper end of planted coefficients");
  gen->add_option("--seed", gen_cfg.seed, "Random seed");
  gen->add_flag("--keep-small", keep_small, "Do not redraw planted coefficients with |beta| < 0.1");
  gen->add_option("--out", out, "Output CSV")->required();
  gen->add_option("--truth", truth_path, "Output JSON with the planted coefficients");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the synthetic benchmark");
  std::string bench_config;
  std::string summary_path;
  bench->add_option("--config", bench_config, "Benchmark JSON config")->required();
  bench->add_option("--out", out, "Per-record CSV report")->required();
  bench->add_option("--summary", summary_path, "Per-cell aggregate CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*fit) {
      auto data = fit_in.load();
      const sridge::ProblemSpec spec(data, fit_lambda, fit_k);
      const sridge::SolverOutcome res = sridge::run_solver(spec, fit_solver);
      Json cfg = fit_in.config();
      cfg["lambda"] = fit_lambda;
      cfg["k"] = fit_k;
      cfg["solver"] = sridge::to_json(fit_solver);
      cfg["simd"] = sridge::kernels::isa_name(sridge::kernels::active_isa());
      Json j{{"config", cfg}, {"n", data->n()}, {"p", data->p()}, {"index_base", 0}};
      j["result"] = sridge::to_json(res);
      j["feature_names"] = feature_names(*data, res.estimator.support);
      emit(out, j);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      if (res.bnb && !res.bnb->proven) return kSolver;
      return kOk;
    }
    if (*relax) {
      auto data = relax_in.load();
      const sridge::ProblemSpec spec(data, relax_lambda, relax_k);
      sridge::RelaxationSolution sol;
      Json extra;
      if (which == "v1" || which == "v3") {
        const sridge::BigMVector bm = sridge::big_m(spec, vupper);
        extra = {{"big_m", sridge::to_json(bm.m)}, {"v_upper", bm.v_upper}, {"rho", bm.rho}};
        sol = which == "v1" ? sridge::solve_v1(spec, bm) : sridge::solve_v3(spec, bm);
      } else if (which == "v2") {
        sol = sridge::solve_v2_perspective(spec);
      } else {
        sol = sridge::solve_v4(spec);
      }
      Json cfg = relax_in.config();
      cfg["lambda"] = relax_lambda;
      cfg["k"] = relax_k;
      cfg["which"] = which;
      cfg["vupper"] = vupper ? Json(*vupper) : Json(nullptr);
      Json j{{"config", cfg}, {"relaxation", sridge::to_json(sol)}};
      if (!extra.is_null()) j["big_m"] = extra;
      emit(out, j);
      if (!sol.converged) {
        std::cerr << "error: relaxation did not reach its tolerance\n";
        return kSolver;
      }
      return kOk;
    }
    if (*tune) {
      auto data = tune_in.load();
      const sridge::GcvReport rep = sridge::gcv_select(data, tune_k, grid, tune_solver);
      Json cfg = tune_in.config();
      cfg["k"] = tune_k;
      cfg["grid"] = grid;
      cfg["solver"] = sridge::to_json(tune_solver);
      emit(out, Json{{"config", cfg}, {"index_base", 0}, {"gcv", sridge::to_json(rep)}});
      for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
      return kOk;
    }
    if (*precision) {
      const sridge::Matrix sigma = sridge::read_matrix_csv(sigma_path, sigma_header);
      const sridge::PrecisionMapping map = sridge::precision_to_regression(sigma, prec_lambda, prec_k);
      const sridge::SolverOutcome res = sridge::run_solver(map.spec, prec_solver);
      const sridge::Matrix omega = sridge::decode_omega(res.estimator.beta, map);
      Json cfg{{"input", sigma_path}, {"header", sigma_header}, {"lambda", prec_lambda}, {"k", prec_k},
               {"solver", sridge::to_json(prec_solver)}};
      emit(out, Json{{"config", cfg},
                     {"t", map.t},
                     {"omega", sridge::to_json(omega)},
                     {"nonzeros", (omega.array() != 0.0).count()},
                     {"objective", sridge::precision_objective(map, omega)},
                     {"regression_objective", res.value},
                     {"scale", map.scale},
                     {"layout", "column-major: beta[i + t*j] = Omega(i, j)"}});
      return kOk;
    }
    if (*gen) {
      gen_cfg.resample_small = !keep_small;
      const sridge::SyntheticData data = sridge::generate_synthetic(gen_cfg);
      sridge::write_dataset_csv(out, data.dataset);
      if (!truth_path.empty()) {
        sridge::write_json(truth_path, Json{{"config", sridge::to_json(gen_cfg)},
                                            {"beta", sridge::to_json(data.true_beta)},
                                            {"support", sridge::to_json(data.true_support)},
                                            {"sigma_sq", data.sigma_sq},
                                            {"index_base", 0}});
      }
      return kOk;
    }
    if (*bench) {
      const sridge::BenchConfig cfg = sridge::bench_config_from_json(sridge::read_json(bench_config));
      const sridge::BenchReport rep = sridge::run_benchmark(cfg);
      sridge::write_bench_records_csv(out, rep);
      if (!summary_path.empty()) sridge::write_bench_summary_csv(summary_path, rep);
      sridge::write_json(out + ".config.json", sridge::to_json(cfg));
      return kOk;
    }
  } catch (const sridge::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const sridge::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const sridge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
  return kInvalid;
}

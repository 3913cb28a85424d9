// Command line front end: synthetic instance generation, dataset analysis,
// single solver runs with machine readable traces, and a multi-run benchmark
// harness that fits convergence slopes against a high precision reference.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcd/bench.hpp"
#include "pcd/dataset.hpp"
#include "pcd/errors.hpp"
#include "pcd/generate.hpp"
#include "pcd/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, pcd::Algorithm> kAlgorithms{
    {"agd1", pcd::Algorithm::Agd1},
    {"agd2", pcd::Algorithm::Agd2},
    {"agd3", pcd::Algorithm::Agd3},
    {"shotgun", pcd::Algorithm::Shotgun},
    {"accel-shotgun", pcd::Algorithm::AccelShotgun},
};
const std::map<std::string, pcd::LossKind> kLosses{
    {"square", pcd::LossKind::Square},
    {"logistic", pcd::LossKind::Logistic},
};
const std::map<std::string, pcd::Sampling> kSamplings{
    {"uniform", pcd::Sampling::UniformSubset},
    {"block", pcd::Sampling::BlockPartition},
};
const std::map<std::string, pcd::ShotgunMode> kModes{
    {"naive", pcd::ShotgunMode::Naive},
    {"implicit", pcd::ShotgunMode::Implicit},
};
const std::map<std::string, pcd::ZeroColumnPolicy> kZeroPolicies{
    {"error", pcd::ZeroColumnPolicy::Error},
    {"drop", pcd::ZeroColumnPolicy::Drop},
};
const std::map<std::string, pcd::StepOption> kStepOptions{
    {"rho", pcd::StepOption::Rho},
    {"kappa", pcd::StepOption::Kappa},
    {"kappa-bar", pcd::StepOption::KappaBar},
};

template <typename T>
T lookup(const std::map<std::string, T>& table, const std::string& key,
         const char* what) {
  auto it = table.find(key);
  if (it == table.end()) {
    throw pcd::ValidationError("unknown " + std::string(what) + " '" + key + "'");
  }
  return it->second;
}

std::optional<double> parse_eta(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw pcd::ValidationError("eta must be a positive number or 'auto', got '" +
                               s + "'");
  }
}

const char* stop_reason_name(pcd::StopReason r) {
  switch (r) {
    case pcd::StopReason::MaxIter: return "max_iter";
    case pcd::StopReason::ObjectiveTol: return "objective_tol";
    case pcd::StopReason::GradNormTol: return "grad_norm_tol";
  }
  return "unknown";
}

const char* algorithm_name(pcd::Algorithm a) {
  switch (a) {
    case pcd::Algorithm::Agd1: return "agd1";
    case pcd::Algorithm::Agd2: return "agd2";
    case pcd::Algorithm::Agd3: return "agd3";
    case pcd::Algorithm::Shotgun: return "shotgun";
    case pcd::Algorithm::AccelShotgun: return "accel-shotgun";
  }
  return "unknown";
}

void write_vector_file(const std::vector<double>& v, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw pcd::IoError("cannot open " + path.string() + " for writing");
  for (double x : v) out << pcd::format_double(x) << '\n';
  if (!out.flush()) throw pcd::IoError("failed writing " + path.string());
}

void write_json_file(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw pcd::IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out.flush()) throw pcd::IoError("failed writing " + path.string());
}

std::string fnv1a_hex(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pcd::IoError("cannot open " + path.string());
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  pcd::GenerateConfig cfg;
  std::string loss = "square";
  std::string out;
  std::string truth;
};

int run_generate(const GenerateArgs& a) {
  pcd::GenerateConfig cfg = a.cfg;
  cfg.loss = lookup(kLosses, a.loss, "loss");
  pcd::GeneratedProblem prob = pcd::generate_problem(cfg);
  pcd::save_dataset(prob.dataset, a.out);
  if (!a.truth.empty()) write_vector_file(prob.w_star, a.truth);
  std::cout << "wrote " << a.out << ": n=" << prob.dataset.n()
            << " d=" << prob.dataset.d() << " nnz=" << prob.dataset.X.nnz()
            << '\n';
  return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string dataset;
  std::string loss = "square";
  std::string zero_columns = "error";
  std::string json_out;
  double rho_tol = 1e-9;
  int rho_max_iter = 10000;
  std::uint64_t seed = 0;
};

int run_analyze(const AnalyzeArgs& a) {
  const pcd::LossModel loss = pcd::LossModel::of(lookup(kLosses, a.loss, "loss"));
  pcd::Dataset raw = pcd::load_dataset(a.dataset);
  std::vector<int> dropped;
  pcd::Dataset ds = pcd::normalize_dataset(
      raw, lookup(kZeroPolicies, a.zero_columns, "zero-columns policy"), &dropped);
  pcd::SparsityReport rep =
      pcd::analyze_matrix(ds.X, a.rho_tol, a.rho_max_iter, a.seed);

  if (!rep.rho_converged) {
    std::cerr << "warning: power iteration unconverged after " << a.rho_max_iter
              << " iterations; rho estimate " << pcd::format_double(rep.rho)
              << " is a lower bound\n";
  }
  const double tol = 1e-9 * std::max(1.0, static_cast<double>(rep.kappa));
  if (!(rep.rho <= rep.kappa_bar + tol && rep.kappa_bar <= rep.kappa + tol)) {
    throw pcd::NumericError(
        "sparsity ordering violated: rho=" + pcd::format_double(rep.rho) +
        " kappa_bar=" + pcd::format_double(rep.kappa_bar) +
        " kappa=" + std::to_string(rep.kappa));
  }

  const int pstar = pcd::p_star(rep.d, rep.rho);
  const double sig_u =
      pcd::interference_sigma(pstar, rep.d, rep.rho, pcd::Sampling::UniformSubset);
  const double sig_b =
      pcd::interference_sigma(pstar, rep.d, rep.rho, pcd::Sampling::BlockPartition);
  json j;
  j["n"] = rep.n;
  j["d"] = rep.d;
  j["nnz"] = rep.nnz;
  j["kappa"] = rep.kappa;
  j["kappa_bar"] = rep.kappa_bar;
  j["rho"] = rep.rho;
  j["rho_converged"] = rep.rho_converged;
  j["dropped_columns"] = static_cast<int>(dropped.size());
  j["loss"] = a.loss;
  j["beta"] = loss.beta;
  j["eta_option1"] = 1.0 / (rep.rho * loss.beta);
  j["eta_option2"] = 1.0 / (rep.kappa * loss.beta);
  j["eta_option3"] = 1.0 / (rep.kappa_bar * loss.beta);
  j["p_star"] = pstar;
  j["sigma_uniform_at_p_star"] = sig_u;
  j["sigma_block_at_p_star"] = sig_b;
  j["eta_star_uniform"] = pcd::eta_star(sig_u);
  j["eta_star_block"] = pcd::eta_star(sig_b);
  j["ordering_ok"] = true;

  std::cout << j.dump(2) << '\n';
  if (!a.json_out.empty()) write_json_file(j, a.json_out);
  return 0;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string dataset;
  std::string algorithm;
  std::string loss = "square";
  double lambda = 0.0;
  int p = 0;
  std::string eta = "auto";
  std::string c_option = "rho";
  std::string sampling = "uniform";
  std::string mode = "implicit";
  std::string zero_columns = "error";
  std::int64_t max_iter = 1000;
  double objective_tol = 0.0;
  double grad_norm_tol = 0.0;
  std::int64_t checkpoint_every = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  bool force_unconverged_rho = false;
  std::string trace_out;
  std::string summary_out;
  std::string solution_out;
};

int run_solve(const SolveArgs& a) {
  pcd::ProblemConfig cfg;
  cfg.algorithm = lookup(kAlgorithms, a.algorithm, "algorithm");
  cfg.loss = lookup(kLosses, a.loss, "loss");
  cfg.lambda = a.lambda;
  cfg.P = a.p;
  cfg.eta = parse_eta(a.eta);
  cfg.c_option = lookup(kStepOptions, a.c_option, "c-option");
  cfg.sampling = lookup(kSamplings, a.sampling, "sampling");
  cfg.mode = lookup(kModes, a.mode, "mode");
  cfg.zero_columns = lookup(kZeroPolicies, a.zero_columns, "zero-columns policy");
  cfg.stop.max_iter = a.max_iter;
  cfg.stop.objective_tol = a.objective_tol;
  cfg.stop.grad_norm_tol = a.grad_norm_tol;
  cfg.stop.checkpoint_every = a.checkpoint_every;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  cfg.force_unconverged_rho = a.force_unconverged_rho;

  pcd::Dataset raw = pcd::load_dataset(a.dataset);
  pcd::SolveOutcome outcome = pcd::solve_problem(raw, cfg);

  const pcd::TraceRow& last = outcome.result.trace.back();
  if (!a.trace_out.empty()) pcd::write_trace_csv(outcome.result.trace, a.trace_out);
  if (!a.solution_out.empty()) write_vector_file(outcome.result.w_final, a.solution_out);
  if (!a.summary_out.empty()) {
    std::string warnings;
    for (const std::string& w : outcome.result.warnings) {
      if (!warnings.empty()) warnings += "; ";
      warnings += w;
    }
    json j;
    j["algorithm"] = a.algorithm;
    j["loss"] = a.loss;
    j["lambda"] = cfg.lambda;
    j["p"] = outcome.resolved.P;
    j["p_auto"] = outcome.resolved.p_auto;
    j["eta"] = outcome.resolved.eta;
    j["eta_auto"] = outcome.resolved.eta_auto;
    j["sigma"] = outcome.resolved.sigma;
    j["c"] = outcome.resolved.c;
    j["sampling"] = a.sampling;
    j["mode"] = a.mode;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["n"] = outcome.report.n;
    j["d"] = outcome.report.d;
    j["nnz"] = outcome.report.nnz;
    j["kappa"] = outcome.report.kappa;
    j["kappa_bar"] = outcome.report.kappa_bar;
    j["rho"] = outcome.report.rho;
    j["rho_converged"] = outcome.report.rho_converged;
    j["normalized_in_process"] = outcome.normalized_in_process;
    j["dropped_columns"] = static_cast<int>(outcome.dropped_columns.size());
    j["stop_reason"] = stop_reason_name(outcome.result.stop_reason);
    j["iterations"] = outcome.result.iterations;
    j["final_objective"] = last.objective;
    j["wall_ns"] = last.elapsed_ns;
    j["warnings"] = warnings;
    write_json_file(j, a.summary_out);
  }
  for (const std::string& w : outcome.result.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  std::cout << "stop=" << stop_reason_name(outcome.result.stop_reason)
            << " iterations=" << outcome.result.iterations
            << " objective=" << pcd::format_double(last.objective) << '\n';
  return 0;
}

// ------------------------------------------------------------------- bench

struct BenchRunSpec {
  std::string name;
  pcd::Algorithm algorithm = pcd::Algorithm::Agd1;
  int p = 0;
  std::optional<double> eta;
  pcd::Sampling sampling = pcd::Sampling::UniformSubset;
  pcd::ShotgunMode mode = pcd::ShotgunMode::Implicit;
  pcd::StepOption c_option = pcd::StepOption::Rho;
  std::int64_t max_iter = 1000;
  std::int64_t checkpoint_every = 1;
};

struct BenchConfig {
  std::string dataset;
  pcd::LossKind loss = pcd::LossKind::Square;
  double lambda = 0.0;
  std::uint64_t seed_base = 0;
  int seed_count = 10;
  std::int64_t slope_t_min = 10;
  std::int64_t slope_t_max = 1000;
  bool bound_check = false;
  double ref_grad_tol = 1e-12;
  std::int64_t ref_max_iter = 1000000;
  std::vector<BenchRunSpec> runs;
};

BenchConfig parse_bench_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw pcd::IoError("cannot open " + path.string());
  json j = json::parse(in);

  BenchConfig cfg;
  if (!j.contains("dataset")) {
    throw pcd::ValidationError("bench config needs a 'dataset' path");
  }
  cfg.dataset = j.at("dataset").get<std::string>();
  cfg.loss = lookup(kLosses, j.value("loss", "square"), "loss");
  cfg.lambda = j.value("lambda", 0.0);
  if (j.contains("seeds")) {
    cfg.seed_base = j["seeds"].value("base", 0);
    cfg.seed_count = j["seeds"].value("count", 10);
  }
  if (cfg.seed_count < 1) throw pcd::ValidationError("seeds.count must be >= 1");
  if (j.contains("slope_window")) {
    const auto& w = j["slope_window"];
    if (!w.is_array() || w.size() != 2) {
      throw pcd::ValidationError("slope_window must be [t_min, t_max]");
    }
    cfg.slope_t_min = w[0].get<std::int64_t>();
    cfg.slope_t_max = w[1].get<std::int64_t>();
  }
  cfg.bound_check = j.value("bound_check", false);
  if (j.contains("reference")) {
    cfg.ref_grad_tol = j["reference"].value("grad_norm_tol", 1e-12);
    cfg.ref_max_iter = j["reference"].value("max_iter", std::int64_t{1000000});
  }
  if (!j.contains("runs") || !j["runs"].is_array() || j["runs"].empty()) {
    throw pcd::ValidationError("bench config needs a non-empty 'runs' array");
  }
  for (const auto& r : j["runs"]) {
    BenchRunSpec spec;
    spec.name = r.value("name", "");
    if (spec.name.empty()) throw pcd::ValidationError("every run needs a 'name'");
    if (!r.contains("algorithm")) {
      throw pcd::ValidationError("run '" + spec.name + "' needs an 'algorithm'");
    }
    spec.algorithm =
        lookup(kAlgorithms, r.at("algorithm").get<std::string>(), "algorithm");
    spec.p = r.value("p", 0);
    if (r.contains("eta")) {
      if (r["eta"].is_string()) {
        spec.eta = parse_eta(r["eta"].get<std::string>());
      } else {
        spec.eta = r["eta"].get<double>();
      }
    }
    spec.sampling = lookup(kSamplings, r.value("sampling", "uniform"), "sampling");
    spec.mode = lookup(kModes, r.value("mode", "implicit"), "mode");
    spec.c_option = lookup(kStepOptions, r.value("c_option", "rho"), "c-option");
    spec.max_iter = r.value("max_iter", std::int64_t{1000});
    spec.checkpoint_every = r.value("checkpoint_every", std::int64_t{1});
    cfg.runs.push_back(spec);
  }
  return cfg;
}

void write_mean_csv(const fs::path& path, const pcd::MeanCurve& curve,
                    const std::vector<double>& bounds) {
  std::ofstream out(path);
  if (!out) throw pcd::IoError("cannot open " + path.string() + " for writing");
  out << "iter,mean_suboptimality,theorem2_bound\n";
  for (std::size_t r = 0; r < curve.iters.size(); ++r) {
    out << curve.iters[r] << ',' << pcd::format_double(curve.mean_suboptimality[r])
        << ',';
    if (r < bounds.size() && std::isfinite(bounds[r])) {
      out << pcd::format_double(bounds[r]);
    }
    out << '\n';
  }
  if (!out.flush()) throw pcd::IoError("failed writing " + path.string());
}

int run_bench(const std::string& config_path, const std::string& out_dir,
              int workers) {
  const BenchConfig cfg = parse_bench_config(config_path);
  fs::create_directories(out_dir);

  const std::string data_hash = fnv1a_hex(cfg.dataset);
  pcd::Dataset raw = pcd::load_dataset(cfg.dataset);
  pcd::Dataset ds = pcd::normalize_dataset(raw, pcd::ZeroColumnPolicy::Error);
  pcd::SparsityReport report = pcd::analyze_matrix(ds.X, 1e-9, 10000, cfg.seed_base);
  pcd::Objective obj(ds, pcd::LossModel::of(cfg.loss), cfg.lambda);

  std::cerr << "computing reference optimum..." << std::endl;
  pcd::ReferenceSolution ref = pcd::compute_reference(
      obj, report, cfg.ref_max_iter, cfg.ref_grad_tol, workers);
  if (cfg.lambda == 0.0 && ref.iterations >= cfg.ref_max_iter) {
    std::cerr << "warning: reference run exhausted its budget of "
              << cfg.ref_max_iter
              << " iterations; suboptimality floors near f_star are unreliable\n";
  }

  json out;
  out["dataset"] = cfg.dataset;
  out["dataset_fnv1a"] = data_hash;
  out["n"] = report.n;
  out["d"] = report.d;
  out["nnz"] = report.nnz;
  out["kappa"] = report.kappa;
  out["kappa_bar"] = report.kappa_bar;
  out["rho"] = report.rho;
  out["rho_converged"] = report.rho_converged;
  out["loss"] = cfg.loss == pcd::LossKind::Square ? "square" : "logistic";
  out["lambda"] = cfg.lambda;
  out["f_star"] = ref.f_star;
  out["r2_from_zero"] = ref.r2_from_zero;
  out["reference_iterations"] = ref.iterations;
  out["seeds_base"] = cfg.seed_base;
  out["seeds_count"] = cfg.seed_count;
  out["slope_window"] = json::array({cfg.slope_t_min, cfg.slope_t_max});
  out["runs"] = json::array();

  const int d = ds.d();
  for (const BenchRunSpec& spec : cfg.runs) {
    const bool is_agd = spec.algorithm == pcd::Algorithm::Agd1 ||
                        spec.algorithm == pcd::Algorithm::Agd2 ||
                        spec.algorithm == pcd::Algorithm::Agd3;
    if (!is_agd && cfg.lambda != 0.0) {
      throw pcd::ValidationError("run '" + spec.name +
                                 "' needs lambda = 0 (coordinate algorithm)");
    }
    pcd::StoppingRule stop;
    stop.max_iter = spec.max_iter;
    stop.checkpoint_every = spec.checkpoint_every;

    const int P = spec.p == 0 && !is_agd ? pcd::p_star(d, report.rho) : spec.p;
    pcd::ShotgunParams params;
    if (spec.algorithm == pcd::Algorithm::AccelShotgun) {
      const double cq = pcd::step_size_c(spec.c_option, report);
      params = spec.eta ? pcd::ShotgunParams::resolve(P, d, cq, *spec.eta,
                                                      spec.sampling, spec.c_option)
                        : pcd::ShotgunParams::resolve_optimal_eta(
                              P, d, cq, spec.sampling, spec.c_option);
    }

    const int seed_count = is_agd ? 1 : cfg.seed_count;
    std::vector<pcd::Trace> traces;
    for (int k = 0; k < seed_count; ++k) {
      pcd::SolveOptions opts;
      opts.seed = cfg.seed_base + static_cast<std::uint64_t>(k);
      opts.workers = workers;
      opts.report = &report;
      pcd::RunResult run;
      switch (spec.algorithm) {
        case pcd::Algorithm::Agd1:
          run = pcd::agd_solve(obj, pcd::StepOption::Rho, stop, opts);
          break;
        case pcd::Algorithm::Agd2:
          run = pcd::agd_solve(obj, pcd::StepOption::Kappa, stop, opts);
          break;
        case pcd::Algorithm::Agd3:
          run = pcd::agd_solve(obj, pcd::StepOption::KappaBar, stop, opts);
          break;
        case pcd::Algorithm::Shotgun:
          run = pcd::shotgun_solve(obj, P, stop, opts, spec.sampling);
          break;
        case pcd::Algorithm::AccelShotgun:
          run = pcd::accel_shotgun_solve(obj, params, stop, spec.mode, opts);
          break;
      }
      for (pcd::TraceRow& row : run.trace) {
        row.suboptimality = row.objective - ref.f_star;
      }
      traces.push_back(std::move(run.trace));
    }

    const fs::path trace_path = fs::path(out_dir) / (spec.name + "_trace.csv");
    pcd::write_trace_csv(traces.front(), trace_path);

    pcd::MeanCurve curve = pcd::mean_suboptimality(traces, ref.f_star);
    std::vector<double> bounds;
    bool bound_ok = true;
    bool have_bounds = false;
    if (cfg.bound_check && spec.algorithm == pcd::Algorithm::AccelShotgun) {
      have_bounds = true;
      bounds.assign(curve.iters.size(),
                    std::numeric_limits<double>::quiet_NaN());
      for (std::size_t r = 0; r < curve.iters.size(); ++r) {
        if (curve.iters[r] < 2) continue;
        bounds[r] = pcd::theorem2_bound(obj.loss().beta, d, params,
                                        ref.r2_from_zero, curve.iters[r]);
        if (curve.mean_suboptimality[r] > bounds[r]) bound_ok = false;
      }
    }
    const fs::path mean_path = fs::path(out_dir) / (spec.name + "_mean.csv");
    write_mean_csv(mean_path, curve, bounds);

    pcd::SlopeFit fit =
        pcd::fit_loglog_slope(curve.iters, curve.mean_suboptimality,
                              cfg.slope_t_min, cfg.slope_t_max);

    json entry;
    entry["name"] = spec.name;
    entry["algorithm"] = algorithm_name(spec.algorithm);
    entry["p"] = is_agd ? d : P;
    if (spec.algorithm == pcd::Algorithm::AccelShotgun) {
      entry["eta"] = params.eta;
      entry["eta_auto"] = params.eta_auto;
      entry["sigma"] = params.sigma;
      entry["mode"] = spec.mode == pcd::ShotgunMode::Naive ? "naive" : "implicit";
    }
    if (!is_agd) {
      entry["sampling"] = spec.sampling == pcd::Sampling::UniformSubset
                              ? "uniform"
                              : "block";
      entry["seeds"] = seed_count;
    }
    entry["max_iter"] = spec.max_iter;
    entry["slope"] = fit.slope;
    entry["intercept"] = fit.intercept;
    entry["slope_points"] = fit.points;
    if (have_bounds) entry["bound_ok"] = bound_ok;
    entry["trace_csv"] = trace_path.filename().string();
    entry["mean_csv"] = mean_path.filename().string();
    out["runs"].push_back(entry);

    std::cout << spec.name << ": slope=" << pcd::format_double(fit.slope)
              << " points=" << fit.points;
    if (have_bounds) std::cout << " bound_ok=" << (bound_ok ? "true" : "false");
    std::cout << '\n';
  }

  write_json_file(out, fs::path(out_dir) / "comparison.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse L1 solver bench tool"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* cgen = app.add_subcommand("generate", "synthesize a sparse instance");
  cgen->add_option("--n", gen.cfg.n, "examples");
  cgen->add_option("--d", gen.cfg.d, "features");
  cgen->add_option("--density", gen.cfg.density, "expected nonzero fraction");
  cgen->add_option("--loss", gen.loss, "square or logistic");
  cgen->add_option("--noise-std", gen.cfg.noise_std, "square loss noise level");
  cgen->add_option("--w-star-nnz", gen.cfg.w_star_nnz, "planted support size");
  cgen->add_option("--seed", gen.cfg.seed, "rng seed");
  cgen->add_option("--out", gen.out, "dataset output path")->required();
  cgen->add_option("--truth", gen.truth, "ground truth output path");

  AnalyzeArgs an;
  CLI::App* can = app.add_subcommand("analyze", "sparsity and spectral report");
  can->add_option("dataset", an.dataset, "dataset path")->required();
  can->add_option("--loss", an.loss, "square or logistic");
  can->add_option("--zero-columns", an.zero_columns, "error or drop");
  can->add_option("--json", an.json_out, "also write the report here");
  can->add_option("--rho-tol", an.rho_tol, "power iteration tolerance");
  can->add_option("--rho-max-iter", an.rho_max_iter, "power iteration cap");
  can->add_option("--seed", an.seed, "rng seed");

  SolveArgs so;
  CLI::App* cso = app.add_subcommand("solve", "run one solver configuration");
  cso->add_option("dataset", so.dataset, "dataset path")->required();
  cso->add_option("--algorithm", so.algorithm,
                  "agd1, agd2, agd3, shotgun, accel-shotgun")
      ->required();
  cso->add_option("--loss", so.loss, "square or logistic");
  cso->add_option("--lambda", so.lambda, "l1 weight");
  cso->add_option("--p", so.p, "coordinates per iteration (0 = automatic)");
  cso->add_option("--eta", so.eta, "step scale or 'auto'");
  cso->add_option("--c-option", so.c_option, "rho, kappa, kappa-bar");
  cso->add_option("--sampling", so.sampling, "uniform or block");
  cso->add_option("--mode", so.mode, "naive or implicit");
  cso->add_option("--zero-columns", so.zero_columns, "error or drop");
  cso->add_option("--max-iter", so.max_iter, "iteration budget");
  cso->add_option("--objective-tol", so.objective_tol, "relative objective stop");
  cso->add_option("--grad-norm-tol", so.grad_norm_tol, "gradient norm stop");
  cso->add_option("--checkpoint-every", so.checkpoint_every, "trace cadence");
  cso->add_option("--seed", so.seed, "rng seed");
  cso->add_option("--workers", so.workers, "worker threads")
      ->envname("PCDOPT_WORKERS");
  cso->add_flag("--force-unconverged-rho", so.force_unconverged_rho,
                "use an unconverged spectral estimate for the step size");
  cso->add_option("--trace", so.trace_out, "trace csv path");
  cso->add_option("--summary", so.summary_out, "summary json path");
  cso->add_option("--solution", so.solution_out, "solution vector path");

  std::string bench_config, bench_out;
  int bench_workers = 1;
  CLI::App* cbe = app.add_subcommand("bench", "multi-run comparison harness");
  cbe->add_option("config", bench_config, "bench config json")->required();
  cbe->add_option("--out-dir", bench_out, "output directory")->required();
  cbe->add_option("--workers", bench_workers, "worker threads")
      ->envname("PCDOPT_WORKERS");

  try {
    app.parse(argc, argv);
    if (cgen->parsed()) return run_generate(gen);
    if (can->parsed()) return run_analyze(an);
    if (cso->parsed()) return run_solve(so);
    if (cbe->parsed()) return run_bench(bench_config, bench_out, bench_workers);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const pcd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pcd::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const pcd::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const pcd::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pcd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

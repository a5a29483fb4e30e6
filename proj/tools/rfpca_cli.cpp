// Command-line front end: simulate / fit / reconstruct / fve / compositional.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfpca/rfpca.hpp"

namespace {

using namespace rfpca;

ManifoldSpec parse_manifold(const std::string& text) {
  if (text == "so3") return make_so3();
  if (text.rfind("sphere:", 0) == 0) {
    const int d = std::atoi(text.c_str() + 7);
    if (d < 1) fail(ErrorKind::ParseError, "bad sphere dimension in '" + text + "'");
    return make_sphere(d);
  }
  if (text == "sphere") return make_sphere(2);
  fail(ErrorKind::ParseError, "unknown manifold '" + text + "' (use sphere:<d> or so3)");
}

std::string default_truth_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
  return stem + ".truth.json";
}

void print_fve_table(const RfpcaModel& model, double u0) {
  std::printf("%-4s %-24s %s\n", "K", "U_K", "FVE");
  std::printf("%-4d %-24.17g %.17g\n", 0, u0, 0.0);
  for (int k = 1; k <= model.k_max(); ++k)
    std::printf("%-4d %-24.17g %.17g\n", k, u0 * (1.0 - model.fve[k - 1]), model.fve[k - 1]);
}

int run_simulate(const std::string& manifold, int n, int m, std::uint64_t seed,
                 int components, const std::string& out, std::string truth_out) {
  SimConfig config;
  config.manifold = parse_manifold(manifold);
  config.n = n;
  config.m = m;
  config.seed = seed;
  config.n_components = components;
  const SimData data = gen_samples(config);
  write_trajectories_csv(out, data.samples);
  if (truth_out.empty()) truth_out = default_truth_path(out);
  write_truth_json(truth_out, config, data);
  std::printf("wrote %s and %s\n", out.c_str(), truth_out.c_str());
  return 0;
}

int run_fit(const std::string& manifold, const std::string& input, int kmax, double gamma,
            const std::string& out, bool compositional, int max_iter, double tol) {
  const ManifoldSpec spec = parse_manifold(manifold);
  const auto samples = ingest_trajectories_csv(input, spec);
  FrechetConfig config;
  config.max_iterations = max_iter;
  config.gradient_tolerance = tol;
  RfpcaModel model = fit_rfpca(spec, samples, config, kmax);
  model.compositional = compositional;
  write_model_json(out, model);
  const double u0 = compute_fve(spec, samples, model, 0).u0;
  print_fve_table(model, u0);
  bool insufficient = false;
  const int kstar = select_num_components(model, gamma, &insufficient);
  if (insufficient)
    std::printf("K* = %d (gamma = %g not reached; using K_max)\n", kstar, gamma);
  else
    std::printf("K* = %d (gamma = %g)\n", kstar, gamma);
  if (model.rank_deficient)
    std::fprintf(stderr, "warning: RankDeficient: trailing eigenvalues below 1e-12 were clamped\n");
  return 0;
}

int run_reconstruct(const std::string& model_path, int K, int mode, const std::string& out,
                    std::string composition_out) {
  const RfpcaModel model = read_model_json(model_path);
  if (mode < 0) fail(ErrorKind::KOutOfRange, "mode must be a positive component index");
  std::vector<TrajectorySample> curves;
  if (mode > 0) {
    // Mode-of-variation curves exp_{mu(t)}(+-3 sqrt(lambda_k) phi_k(t)).
    if (mode > model.k_max())
      fail(ErrorKind::KOutOfRange, "mode " + std::to_string(mode) + " exceeds K_max");
    const double scale = 3.0 * std::sqrt(model.eigenvalues[mode - 1]);
    std::vector<double> plus(model.k_max(), 0.0), minus(model.k_max(), 0.0);
    plus[mode - 1] = scale;
    minus[mode - 1] = -scale;
    curves.push_back({"mean", model.grid, truncate_representation(model, plus, 0).curve});
    curves.push_back({"mode" + std::to_string(mode) + "+", model.grid,
                      truncate_representation(model, plus, mode).curve});
    curves.push_back({"mode" + std::to_string(mode) + "-", model.grid,
                      truncate_representation(model, minus, mode).curve});
  } else {
    for (int i = 0; i < model.n_subjects(); ++i)
      curves.push_back({model.subject_ids[i], model.grid,
                        truncate_representation(model, model.scores[i], K).curve});
  }
  write_trajectories_csv(out, curves);
  std::printf("wrote %s\n", out.c_str());
  if (model.compositional) {
    if (composition_out.empty()) {
      const auto dot = out.rfind('.');
      composition_out = (dot == std::string::npos ? out : out.substr(0, dot)) +
                        ".composition.csv";
    }
    std::vector<CompositionCurve> comps;
    std::vector<std::vector<bool>> flags;
    for (const auto& c : curves) {
      std::vector<bool> in_orthant;
      comps.push_back(sphere_to_composition_flagged(c, in_orthant));
      flags.push_back(std::move(in_orthant));
    }
    write_proportions_csv(composition_out, comps, &flags);
    std::printf("wrote %s\n", composition_out.c_str());
  }
  return 0;
}

int run_fve(const std::string& model_path, const std::string& input, const std::string& baseline,
            const std::string& l2_chart) {
  const RfpcaModel model = read_model_json(model_path);
  const auto samples = ingest_trajectories_csv(input, model.spec);
  const int kmax = model.k_max();
  std::vector<double> uk(kmax + 1);
  for (int k = 0; k <= kmax; ++k) uk[k] = compute_fve(model.spec, samples, model, k).uk;
  const double u0 = compute_fve(model.spec, samples, model, 0).u0;

  if (baseline.empty()) {
    std::printf("%-4s %-24s %s\n", "K", "U_K", "FVE");
    for (int k = 0; k <= kmax; ++k)
      std::printf("%-4d %-24.17g %.17g\n", k, uk[k], (u0 - uk[k]) / u0);
    return 0;
  }
  if (baseline != "l2")
    fail(ErrorKind::ParseError, "unknown baseline '" + baseline + "' (use l2)");
  const bool chart = l2_chart == "lonlat";
  if (!chart && !l2_chart.empty())
    fail(ErrorKind::ParseError, "unknown chart '" + l2_chart + "' (use lonlat)");
  const RfpcaModel l2 = chart ? fit_l2_lonlat(samples, kmax) : fit_l2_fpca(samples, kmax);
  std::printf("%-4s %-24s %-12s %-24s %s\n", "K", "U_K(rfpca)", "FVE(rfpca)", "U_K(l2)",
              "FVE(l2)");
  for (int k = 0; k <= kmax; ++k) {
    const FveResult r =
        chart ? geodesic_fve_l2_lonlat(model.spec, samples, l2, k, model.mean_curve)
              : geodesic_fve_l2(model.spec, samples, l2, k, model.mean_curve);
    std::printf("%-4d %-24.17g %-12.6f %-24.17g %.6f\n", k, uk[k], (u0 - uk[k]) / u0, r.uk,
                r.fve);
  }
  return 0;
}

int run_compositional(const std::string& counts_path, double bandwidth, int grid_m,
                      const std::string& out) {
  const auto panels = read_counts_csv(counts_path);
  if (grid_m < 2) fail(ErrorKind::GridMismatch, "need at least 2 evaluation times");
  // Shared evaluation grid over the intersection of all observed ranges,
  // so every subject lands on the same absolute times before the
  // normalization to [0,1].
  double lo = panels.front().times.front(), hi = panels.front().times.back();
  for (const auto& p : panels) {
    lo = std::max(lo, p.times.front());
    hi = std::min(hi, p.times.back());
  }
  if (!(hi > lo))
    fail(ErrorKind::GridMismatch, "subjects' observation ranges do not overlap");
  std::vector<double> eval(grid_m);
  for (int j = 0; j < grid_m; ++j)
    eval[j] = lo + (hi - lo) * static_cast<double>(j) / (grid_m - 1);
  std::vector<TrajectorySample> samples;
  samples.reserve(panels.size());
  for (const auto& p : panels)
    samples.push_back(sqrt_embed(to_proportions(smooth_counts(p, bandwidth, eval))));
  write_trajectories_csv(out, samples);
  std::printf("wrote %s (%zu subjects on S^%zu, %d times)\n", out.c_str(), samples.size(),
              samples.front().points.front().coords.size() - 1, grid_m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian functional principal component analysis for trajectories on "
               "S^d and SO(3)"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "generate trajectories from the synthetic design");
  std::string sim_manifold = "sphere:2", sim_out, sim_truth;
  int sim_n = 100, sim_m = 20, sim_components = 20;
  std::uint64_t sim_seed = 1;
  sim->add_option("--manifold", sim_manifold, "sphere:<d> or so3")->capture_default_str();
  sim->add_option("--n", sim_n, "number of subjects")->capture_default_str();
  sim->add_option("--m", sim_m, "grid size")->capture_default_str();
  sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  sim->add_option("--components", sim_components, "number of active components")
      ->capture_default_str();
  sim->add_option("--out", sim_out, "output trajectory CSV")->required();
  sim->add_option("--truth-out", sim_truth, "ground-truth JSON (default <out>.truth.json)");

  auto* fit = app.add_subcommand("fit", "fit the intrinsic FPCA model");
  std::string fit_manifold, fit_input, fit_out;
  int fit_kmax = 0, fit_max_iter = 200;
  double fit_gamma = 0.95, fit_tol = 1e-10;
  bool fit_compositional = false;
  fit->add_option("--manifold", fit_manifold, "sphere:<d> or so3")->required();
  fit->add_option("--input", fit_input, "trajectory CSV")->required();
  fit->add_option("--kmax", fit_kmax, "number of components to estimate")->required();
  fit->add_option("--gamma", fit_gamma, "FVE threshold for K*")->capture_default_str();
  fit->add_option("--out", fit_out, "output model JSON")->required();
  fit->add_flag("--compositional", fit_compositional,
                "tag the model as square-root compositional");
  fit->add_option("--max-iterations", fit_max_iter, "Frechet mean iteration cap")
      ->capture_default_str();
  fit->add_option("--tolerance", fit_tol, "Frechet mean gradient tolerance")
      ->capture_default_str();

  auto* rec = app.add_subcommand("reconstruct", "emit K-truncated trajectories from a model");
  std::string rec_model, rec_out, rec_comp_out;
  int rec_k = 0, rec_mode = 0;
  rec->add_option("--model", rec_model, "model JSON")->required();
  rec->add_option("--K", rec_k, "truncation level (0 = mean curve)");
  rec->add_option("--mode", rec_mode, "emit mode-of-variation curves for component k");
  rec->add_option("--out", rec_out, "output trajectory CSV")->required();
  rec->add_option("--composition-out", rec_comp_out,
                  "composition CSV when the model is compositional");

  auto* fve = app.add_subcommand("fve", "residual variance and FVE table for a fitted model");
  std::string fve_model, fve_input, fve_baseline, fve_chart;
  fve->add_option("--model", fve_model, "model JSON")->required();
  fve->add_option("--input", fve_input, "trajectory CSV the model was fitted on")->required();
  fve->add_option("--baseline", fve_baseline, "add comparison columns (l2)");
  fve->add_option("--l2-chart", fve_chart, "chart for the L2 baseline on S^2 (lonlat)");

  auto* comp = app.add_subcommand("compositional",
                                  "smooth counts and embed them on the sphere");
  std::string comp_counts, comp_out;
  double comp_bandwidth = 0.0;
  int comp_grid = 0;
  comp->add_option("--counts", comp_counts, "counts CSV")->required();
  comp->add_option("--bandwidth", comp_bandwidth, "kernel bandwidth in time units")->required();
  comp->add_option("--grid", comp_grid, "number of evaluation times")->required();
  comp->add_option("--out", comp_out, "output trajectory CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints usage or help text
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sim)
      return run_simulate(sim_manifold, sim_n, sim_m, sim_seed, sim_components, sim_out,
                          sim_truth);
    if (*fit)
      return run_fit(fit_manifold, fit_input, fit_kmax, fit_gamma, fit_out, fit_compositional,
                     fit_max_iter, fit_tol);
    if (*rec) return run_reconstruct(rec_model, rec_k, rec_mode, rec_out, rec_comp_out);
    if (*fve) return run_fve(fve_model, fve_input, fve_baseline, fve_chart);
    if (*comp) return run_compositional(comp_counts, comp_bandwidth, comp_grid, comp_out);
  } catch (const rfpca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

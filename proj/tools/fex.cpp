// fex: constants, certificates and LP solves for the radial Fourier
// uncertainty inequality. One subcommand per operation; JSON to stdout,
// CSV sidecars on request. Exit codes: 0 ok, 1 usage/parse, 2 unknown
// parameter case, 3 solver failure, 4 verification failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fex/constants.hpp"
#include "fex/io.hpp"
#include "fex/lp.hpp"
#include "fex/positivity.hpp"
#include "fex/signed_demo.hpp"
#include "fex/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;

struct CsvOut {
  std::string text;
  void row(std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
      if (!first) text += ',';
      text += f;
      first = false;
    }
    text += '\n';
  }
};

void emit(const std::string& payload, const std::string& out_file) {
  if (out_file.empty()) {
    std::fputs(payload.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    fex::write_file(out_file, payload + "\n");
  }
}

int cmd_constant(double alpha, double beta, int dim, const std::string& out) {
  fex::Triple t(alpha, beta, dim);
  fex::ConstantResult c = fex::closed_form_constant(t);
  fex::JsonWriter w;
  w.begin_object();
  w.key("alpha").value(alpha);
  w.key("beta").value(beta);
  w.key("dim").value(dim);
  w.key("source").value(fex::constant_source_name(c.source));
  if (c.source == fex::ConstantSource::Unknown) {
    w.key("value").null();
    w.key("extremizer").null();
    w.end_object();
    emit(w.str(), out);
    return kExitUnknown;
  }
  w.key("value").value(c.value);
  w.key("extremizer").value(fex::exemplar_name(*c.extremizer_hint));
  if (c.lambda) w.key("lambda_beta").value(*c.lambda);
  fex::CrossCheckReport cc = fex::cross_check(t);
  w.key("cross_check").begin_object();
  w.key("functional").value(cc.functional_value);
  w.key("abs_discrepancy").value(cc.abs_discrepancy);
  w.key("rel_discrepancy").value(cc.rel_discrepancy);
  w.end_object();
  w.end_object();
  emit(w.str(), out);
  return kExitOk;
}

int cmd_lambda(double beta, const std::string& out) {
  double l = fex::lambda_beta(beta);
  fex::JsonWriter w;
  w.begin_object();
  w.key("beta").value(beta);
  w.key("lambda").value(l);
  w.key("residual_rearranged").value(std::fabs(fex::lambda_residual(beta, l)));
  if (beta < 1.0)
    w.key("residual_tan_form")
        .value(std::fabs(fex::two_pi * l - (1.0 - beta) * std::tan(fex::two_pi * l)));
  w.key("bound_upper").value(3.0 * beta);
  w.key("bound_lower").value(3.0 * beta - 0.75 * beta * beta);
  w.key("two_pi_lambda_sq").value(fex::two_pi * l * fex::two_pi * l);
  w.end_object();
  emit(w.str(), out);
  return kExitOk;
}

int cmd_solve(double alpha, double beta, int dim, double r_max, int n_radii,
              int initial_freqs, double freq_window, int max_cut_rounds,
              double violation_tol, bool positive_fourier,
              const std::string& output_dir, bool csv) {
  fex::Triple t(alpha, beta, dim);
  fex::LpInstance inst;
  if (r_max > 0.0 && freq_window > 0.0) {
    inst = fex::build_instance(t, r_max, n_radii, initial_freqs, freq_window);
  } else {
    inst = fex::default_instance(t, n_radii);
    if (r_max > 0.0) {
      double w = inst.freq_window;
      inst = fex::build_instance(t, r_max, n_radii, initial_freqs, w);
    }
  }
  inst.options.max_cut_rounds = max_cut_rounds;
  inst.options.violation_tol = violation_tol;
  inst.positive_fourier = positive_fourier;

  fex::LpSolution sol = fex::solve(inst);
  if (sol.status != fex::SimplexStatus::Optimal) {
    fex::JsonWriter w;
    w.begin_object();
    w.key("status").value(fex::simplex_status_name(sol.status));
    w.key("cut_rounds").value(sol.cut_rounds);
    w.end_object();
    emit(w.str(), "");
    return kExitSolver;
  }
  fex::Certificate cert = fex::extract_certificate(sol, inst);
  fex::DualityReport dual = fex::duality_report(sol, inst, cert);
  fex::StructureReport structure =
      fex::structure_diagnostics(sol, t, inst.freq_window);

  fex::JsonWriter w;
  w.begin_object();
  w.key("status").value(fex::simplex_status_name(sol.status));
  w.key("objective").value(sol.objective);
  w.key("constant_estimate").value(sol.constant_estimate);
  w.key("eq_dual").value(sol.eq_dual);
  w.key("cut_rounds").value(sol.cut_rounds);
  w.key("max_violation").value(sol.max_violation);
  w.key("simplex_iterations").value(sol.simplex_iterations);
  w.key("masses").begin_array();
  for (std::size_t i = 0; i < sol.radii.size(); ++i) {
    if (sol.masses[i] <= 0.0) continue;
    w.begin_array().value(sol.radii[i]).value(sol.masses[i]).end_array();
  }
  w.end_array();
  w.key("duals").begin_array();
  for (std::size_t j = 0; j < sol.freqs.size(); ++j) {
    if (sol.duals[j] == 0.0) continue;
    w.begin_array().value(sol.freqs[j]).value(sol.duals[j]).end_array();
  }
  w.end_array();
  w.key("diagnostics").begin_object();
  w.key("duality_gap_rel").value(dual.gap_rel);
  w.key("slackness_freq").value(dual.slackness_freq);
  w.key("slackness_support").value(dual.slackness_support);
  w.key("duality_pass").value(dual.pass);
  w.key("cluster_count").value(structure.cluster_count);
  w.key("largest_cluster_mass").value(structure.largest_cluster_mass);
  w.key("mass_outside_clusters").value(structure.mass_outside_clusters);
  w.key("support_radius").value(structure.support_radius);
  w.key("decay_exponent").value(structure.decay_exponent);
  w.key("decay_fit_residual").value(structure.decay_fit_residual);
  w.key("single_ring").value(structure.single_ring);
  if (positive_fourier) {
    double corr = fex::profile_correlation(
        sol, [&](double r) { return 1.0 - r / structure.support_radius; },
        structure.support_radius);
    w.key("profile_correlation_triangle").value(corr);
  }
  w.end_object();
  w.end_object();

  std::string payload = w.str();
  std::fputs(payload.c_str(), stdout);
  std::fputc('\n', stdout);
  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
    fex::write_file(output_dir + "/report.json", payload + "\n");
    if (csv) {
      CsvOut masses;
      masses.row({"radius", "mass"});
      for (std::size_t i = 0; i < sol.radii.size(); ++i)
        masses.row({fex::format_real(sol.radii[i]), fex::format_real(sol.masses[i])});
      fex::write_file(output_dir + "/masses.csv", masses.text);
      CsvOut spectrum;
      spectrum.row({"freq", "weighted_transform"});
      fex::RadialMeasure mu = fex::solution_measure(sol, t, 1e-15);
      double step = inst.freq_window / 2048.0;
      for (double f = step; f <= inst.freq_window; f += step)
        spectrum.row({fex::format_real(f),
                  fex::format_real(std::fabs(fex::fourier_at(mu, f)) * std::pow(f, beta))});
      fex::write_file(output_dir + "/spectrum.csv", spectrum.text);
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& cert_file, const std::string& measure_file,
               double alpha, double beta, double tol_support, double tol_lambda,
               const std::string& out) {
  fex::Certificate cert = fex::certificate_from_json(fex::read_file(cert_file));
  fex::RadialMeasure mu = fex::measure_from_json(fex::read_file(measure_file));
  fex::Triple t(alpha, beta, mu.dim());
  fex::VerifyTolerances tol;
  tol.support = tol_support;
  tol.lambda = tol_lambda;
  fex::CertificateReport rep = fex::verify_certificate(cert, mu, t, tol);
  fex::JsonWriter w;
  w.begin_object();
  w.key("pass").value(rep.pass);
  w.key("failed_condition").value(rep.failed_condition);
  w.key("h_nonneg").begin_object();
  w.key("certified").value(rep.h_nonneg.certified);
  w.key("grid_only").value(rep.h_grid_only);
  w.key("min_margin").value(rep.h_nonneg.min_margin);
  w.key("intervals_checked").value(rep.h_nonneg.intervals_checked);
  w.key("r_cut").value(rep.r_cut);
  w.end_object();
  w.key("support_residual").value(rep.support_residual);
  w.key("support_allowance").value(rep.support_allowance);
  w.key("sign_condition_margin").value(rep.sign_condition_margin);
  w.key("lambda_membership_residual").value(rep.lambda_membership_residual);
  w.key("sup_norm_value").value(rep.sup_norm_value);
  w.key("positive_fourier_mode").value(rep.positive_fourier_mode);
  w.end_object();
  emit(w.str(), out);
  return rep.pass ? kExitOk : kExitVerification;
}

void g_report_json(fex::JsonWriter& w, const fex::GReport& g) {
  w.key("pass").value(g.pass);
  w.key("g_at_1").value(g.g_at_1);
  w.key("gp_at_1").value(g.gp_at_1);
  w.key("slope_at_0").value(g.slope_at_0);
  w.key("gpp_at_1").value(g.gpp_at_1);
  w.key("x_cut").value(g.x_cut);
  w.key("min_margin").value(g.min_margin);
  w.key("min_zero_growth").value(g.min_zero_growth);
}

int cmd_trig(const std::string& out) {
  fex::JsonWriter w;
  w.begin_object();
  bool all = true;

  fex::TanBoundsReport tb = fex::check_tan_bounds(400);
  all = all && tb.pass;
  w.key("tan_bounds").begin_object();
  w.key("pass").value(tb.pass);
  w.key("min_margin_upper").value(tb.min_margin_upper);
  w.key("min_margin_lower").value(tb.min_margin_lower);
  w.key("series_floor_upper").value(tb.series_floor_upper);
  w.key("series_floor_lower").value(tb.series_floor_lower);
  w.end_object();

  w.key("g_beta1").begin_array();
  for (double a : {fex::sphere_alpha_threshold(), 1.9, 2.0}) {
    fex::GReport g = fex::check_G_beta1(a, 400);
    all = all && g.pass;
    w.begin_object();
    w.key("alpha").value(a);
    g_report_json(w, g);
    w.end_object();
  }
  w.end_array();

  w.key("g_general").begin_array();
  for (double a : {2.0, 3.0, 5.0}) {
    for (double b : {0.25, 0.5, 0.75, 1.0}) {
      fex::GReport g = fex::check_G_general(a, b, 200);
      all = all && g.pass;
      w.begin_object();
      w.key("alpha").value(a);
      w.key("beta").value(b);
      g_report_json(w, g);
      w.end_object();
    }
  }
  w.end_array();

  w.key("all_pass").value(all);
  w.end_object();
  emit(w.str(), out);
  return all ? kExitOk : kExitVerification;
}

int cmd_fourier(const std::string& measure_file, double t_max, int points,
                double beta, const std::string& out) {
  fex::RadialMeasure mu = fex::measure_from_json(fex::read_file(measure_file));
  CsvOut csv;
  csv.row({"freq", "transform", "weighted"});
  for (int i = 0; i <= points; ++i) {
    double t = t_max * i / points;
    double v = fex::fourier_at(mu, t);
    double wv = (t > 0.0) ? std::fabs(v) * std::pow(t, beta) : 0.0;
    csv.row({fex::format_real(t), fex::format_real(v), fex::format_real(wv)});
  }
  if (out.empty()) std::fputs(csv.text.c_str(), stdout);
  else fex::write_file(out, csv.text);
  return kExitOk;
}

int cmd_demo_signed(double beta, const std::string& modes_csv, int trials,
                    long seed, const std::string& out) {
  std::vector<int> modes;
  std::string cur;
  for (char c : modes_csv + ",") {
    if (c == ',') {
      if (!cur.empty()) modes.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  CsvOut csv;
  csv.row({"num_modes", "trial", "ratio"});
  for (int m : modes) {
    fex::SignedDemoStats st =
        fex::signed_ratio_demo(beta, m, trials, static_cast<std::uint64_t>(seed));
    for (const auto& tr : st.trials)
      csv.row({std::to_string(m), std::to_string(tr.trial), fex::format_real(tr.ratio)});
  }
  if (out.empty()) std::fputs(csv.text.c_str(), stdout);
  else fex::write_file(out, csv.text);
  return kExitOk;
}

}  // namespace

namespace {

// flat key=value configuration, injected after the subcommand token so that
// explicit flags (parsed later, TakeLast) win over file values
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string cfg;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config" && std::next(it) != args.end()) {
      cfg = *std::next(it);
      it = args.erase(it, std::next(it, 2));
    } else if (it->rfind("--config=", 0) == 0) {
      cfg = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (cfg.empty() || args.empty()) return args;
  std::ifstream in(cfg);
  if (!in) throw std::runtime_error("cannot open config file " + cfg);
  std::vector<std::string> inject;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string v) {
      v.erase(0, v.find_first_not_of(" \t"));
      v.erase(v.find_last_not_of(" \t\r") + 1);
      return v;
    };
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (!k.empty()) inject.push_back("--" + k + "=" + v);
  }
  args.insert(std::next(args.begin()), inject.begin(), inject.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extremizers and certificates for a radial Fourier uncertainty inequality"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  double alpha = 2.0, beta = 1.0;
  int dim = 1;
  std::string out_file, output_dir, cert_file, measure_file, modes = "8,64,512";
  double r_max = 0.0, freq_window = 0.0, violation_tol = 1e-7;
  int n_radii = 401, initial_freqs = 64, max_cut_rounds = 20, points = 512, trials = 20;
  double t_max = 12.0, tol_support = 1e-6, tol_lambda = 1e-6;
  long seed = 1234;
  bool positive_fourier = false, csv = false;

  auto* c_const = app.add_subcommand("constant", "closed-form optimal constant");
  c_const->add_option("--alpha", alpha)->required();
  c_const->add_option("--beta", beta)->required();
  c_const->add_option("--dim", dim)->required();
  c_const->add_option("--out", out_file);

  auto* c_lambda = app.add_subcommand("lambda", "critical frequency lambda_beta");
  c_lambda->add_option("--beta", beta)->required();
  c_lambda->add_option("--out", out_file);

  auto* c_solve = app.add_subcommand("solve", "discretized extremal LP");
  c_solve->add_option("--alpha", alpha)->required();
  c_solve->add_option("--beta", beta)->required();
  c_solve->add_option("--dim", dim)->required();
  c_solve->add_option("--r-max", r_max);
  c_solve->add_option("--n-radii", n_radii);
  c_solve->add_option("--initial-freqs", initial_freqs);
  c_solve->add_option("--freq-window", freq_window);
  c_solve->add_option("--max-cut-rounds", max_cut_rounds);
  c_solve->add_option("--violation-tol", violation_tol);
  c_solve->add_flag("--positive-fourier", positive_fourier);
  c_solve->add_option("--output-dir", output_dir);
  c_solve->add_flag("--csv", csv);

  auto* c_verify = app.add_subcommand("verify", "check a dual certificate against a measure");
  c_verify->add_option("--cert", cert_file)->required();
  c_verify->add_option("--measure", measure_file)->required();
  c_verify->add_option("--alpha", alpha)->required();
  c_verify->add_option("--beta", beta)->required();
  c_verify->add_option("--tol-support", tol_support);
  c_verify->add_option("--tol-lambda", tol_lambda);
  c_verify->add_option("--out", out_file);

  auto* c_trig = app.add_subcommand("trig", "certify the auxiliary trigonometric inequalities");
  c_trig->add_option("--out", out_file);

  auto* c_fourier = app.add_subcommand("fourier", "dump the transform of a measure as CSV");
  c_fourier->add_option("--measure", measure_file)->required();
  c_fourier->add_option("--t-max", t_max);
  c_fourier->add_option("--points", points);
  c_fourier->add_option("--beta", beta);
  c_fourier->add_option("--out", out_file);

  auto* c_demo = app.add_subcommand("demo-signed", "random-sign ratio exhibit, CSV output");
  c_demo->add_option("--beta", beta);
  c_demo->add_option("--modes", modes);
  c_demo->add_option("--trials", trials);
  c_demo->add_option("--seed", seed);
  c_demo->add_option("--out", out_file);

  try {
    std::vector<std::string> args = apply_config({argv + 1, argv + argc});
    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*c_const) return cmd_constant(alpha, beta, dim, out_file);
    if (*c_lambda) return cmd_lambda(beta, out_file);
    if (*c_solve)
      return cmd_solve(alpha, beta, dim, r_max, n_radii, initial_freqs, freq_window,
                       max_cut_rounds, violation_tol, positive_fourier, output_dir, csv);
    if (*c_verify)
      return cmd_verify(cert_file, measure_file, alpha, beta, tol_support, tol_lambda,
                        out_file);
    if (*c_trig) return cmd_trig(out_file);
    if (*c_fourier) return cmd_fourier(measure_file, t_max, points, beta, out_file);
    if (*c_demo) return cmd_demo_signed(beta, modes, trials, seed, out_file);
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitUnknown;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitUsage;
}

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nnkkt/deviation.hpp"
#include "nnkkt/errors.hpp"
#include "nnkkt/io.hpp"
#include "nnkkt/kkt.hpp"
#include "nnkkt/network.hpp"
#include "nnkkt/solver.hpp"

namespace nnkkt {

namespace detail {

inline int verdict_exit_code(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::satisfied: return 0;
    case VerdictStatus::violated: return 2;
    default: return 3;
  }
}

inline std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline LossMode parse_loss(const std::string& s) {
  if (s == "uniform") return LossMode::uniform;
  if (s == "l1") return LossMode::manhattan;
  throw OutOfRangeError("loss must be 'uniform' or 'l1', got '" + s + "'");
}

inline GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  std::size_t c1 = s.find(':');
  std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                             : s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw OutOfRangeError("grid must be lo:hi:resolution, got '" + s + "'");
  try {
    g.lo = std::stod(s.substr(0, c1));
    g.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    g.resolution = std::stoi(s.substr(c2 + 1));
  } catch (const std::exception&) {
    throw OutOfRangeError("grid must be lo:hi:resolution, got '" + s + "'");
  }
  if (g.resolution < 1 || !(g.lo <= g.hi))
    throw OutOfRangeError("grid bounds inverted or resolution < 1");
  return g;
}

inline ClassificationSummary summarize(const DeviationProfile& profile,
                                       const PointClassification& cls) {
  ClassificationSummary s;
  s.n1 = cls.n1();
  s.n2 = cls.n2();
  s.n3 = cls.n3();
  s.z_max = profile.z_max;
  s.l1_total = profile.l1_total;
  s.tol = cls.tol;
  return s;
}

inline void fill_verdict(Report& r, const OptimalityVerdict& v) {
  r.verdict = verdict_status_name(v.status);
  if (v.hull_witness) {
    r.witness_u = v.hull_witness->u_weights;
    r.witness_v = v.hull_witness->v_weights;
    r.witness_point = v.hull_witness->point;
  }
  if (v.zonotope_t) r.zonotope_t = *v.zonotope_t;
  if (v.separation) {
    r.separation_a = v.separation->a;
    r.separation_b = v.separation->b;
    r.separation_delta = v.separation->delta;
  }
  if (!v.note.empty()) r.note = v.note;
}

}  // namespace detail

// Command-line entry point; args excludes the program name. Exit codes:
// 0 success / Satisfied, 2 Violated, 3 Degenerate, 1 usage or I/O error.
inline int run_cli(std::vector<std::string> args,
                   std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"necessary-optimality toolkit for shallow network fitting"};
  app.require_subcommand(1);

  std::string data_path, params_path, out_path;
  std::string loss_name = "uniform";
  std::string activation_name = "sigmoid";
  std::string arch_name = "no_hidden";
  std::string grid_spec = "-10:10:201";
  double tol = 0.0;
  double eps = 1e-6;
  double fd_step = 1e-5;
  int units = 1;
  std::uint64_t seed = 0;
  bool timings = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write the JSON report here");
    sub->add_option("--seed", seed, "seed recorded in the report");
    sub->add_flag("--timings", timings, "include elapsed time in the report");
  };

  CLI::App* eval_cmd = app.add_subcommand("eval", "model values at the data points");
  eval_cmd->add_option("--data", data_path, "dataset CSV")->required();
  eval_cmd->add_option("--params", params_path, "parameters JSON")->required();
  add_common(eval_cmd);

  CLI::App* resid_cmd =
      app.add_subcommand("residuals", "deviation profile and classification");
  resid_cmd->add_option("--data", data_path, "dataset CSV")->required();
  resid_cmd->add_option("--params", params_path, "parameters JSON")->required();
  resid_cmd->add_option("--loss", loss_name, "uniform or l1");
  resid_cmd->add_option("--tol", tol, "classification tolerance override");
  add_common(resid_cmd);

  CLI::App* check_cmd =
      app.add_subcommand("check", "necessary optimality condition verdict");
  check_cmd->add_option("--data", data_path, "dataset CSV")->required();
  check_cmd->add_option("--params", params_path, "parameters JSON")->required();
  check_cmd->add_option("--loss", loss_name, "uniform or l1")->required();
  check_cmd->add_option("--tol", tol, "classification tolerance override");
  add_common(check_cmd);

  CLI::App* bisect_cmd = app.add_subcommand(
      "solve-bisect", "uniform no-hidden solve via level bisection");
  bisect_cmd->add_option("--data", data_path, "dataset CSV")->required();
  bisect_cmd->add_option("--activation", activation_name,
                         "sigmoid, tanh, or softplus");
  bisect_cmd->add_option("--eps", eps, "bisection stopping width");
  add_common(bisect_cmd);

  CLI::App* grad_cmd =
      app.add_subcommand("grad-check", "finite-difference gradient audit");
  grad_cmd->add_option("--data", data_path, "dataset CSV")->required();
  grad_cmd->add_option("--params", params_path, "parameters JSON")->required();
  grad_cmd->add_option("--step", fd_step, "central difference step");
  add_common(grad_cmd);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "brute-force grid minimization");
  oracle_cmd->add_option("--data", data_path, "dataset CSV")->required();
  oracle_cmd->add_option("--loss", loss_name, "uniform or l1");
  oracle_cmd->add_option("--activation", activation_name,
                         "sigmoid, tanh, or softplus");
  oracle_cmd->add_option("--arch", arch_name, "no_hidden or one_hidden");
  oracle_cmd->add_option("--units", units, "hidden units for one_hidden");
  oracle_cmd->add_option("--grid", grid_spec, "lo:hi:resolution per parameter");
  add_common(oracle_cmd);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  auto started = std::chrono::steady_clock::now();
  Report report;
  report.seed = seed;
  int code = 0;

  try {
    if (app.got_subcommand(eval_cmd)) {
      report.command = "eval";
      ParamsFile pf = load_params(params_path);
      Dataset data = load_dataset(data_path);
      report.activation = pf.activation.name();
      std::vector<double> values(data.size());
      for (int i = 0; i < data.size(); ++i)
        values[i] = network_eval(pf.params, pf.activation, data.point(i));
      report.values = std::move(values);
      out << "eval: " << data.size() << " values\n";
    } else if (app.got_subcommand(resid_cmd)) {
      report.command = "residuals";
      LossMode mode = detail::parse_loss(loss_name);
      report.loss = loss_mode_name(mode);
      ParamsFile pf = load_params(params_path);
      Dataset data = load_dataset(data_path);
      report.activation = pf.activation.name();
      DeviationProfile profile = compute_residuals(pf.params, pf.activation, data);
      report.values = profile.residuals;
      double tau = tol > 0.0 ? tol : default_tol(mode, profile.z_max);
      try {
        PointClassification cls = classify(profile, mode, tau);
        report.classification = detail::summarize(profile, cls);
        out << "residuals " << report.loss << ": z_max="
            << detail::short_num(profile.z_max)
            << " l1_total=" << detail::short_num(profile.l1_total) << " n1="
            << cls.n1() << " n2=" << cls.n2() << " n3=" << cls.n3() << "\n";
      } catch (const DegenerateProfileError& e) {
        report.note = e.what();
        out << "residuals " << report.loss
            << ": degenerate profile, z_max=" << detail::short_num(profile.z_max)
            << "\n";
      }
    } else if (app.got_subcommand(check_cmd)) {
      report.command = "check";
      LossMode mode = detail::parse_loss(loss_name);
      report.loss = loss_mode_name(mode);
      ParamsFile pf = load_params(params_path);
      Dataset data = load_dataset(data_path);
      report.activation = pf.activation.name();
      DeviationProfile profile = compute_residuals(pf.params, pf.activation, data);
      double tau = tol > 0.0 ? tol : default_tol(mode, profile.z_max);
      try {
        PointClassification cls = classify(profile, mode, tau);
        OptimalityVerdict verdict =
            mode == LossMode::uniform
                ? check_uniform(pf.params, pf.activation, data, tau)
                : check_manhattan(pf.params, pf.activation, data, tau);
        report.classification = detail::summarize(profile, cls);
        detail::fill_verdict(report, verdict);
        if (verdict.status == VerdictStatus::satisfied) {
          Multipliers mult = multipliers_from_witness(verdict, cls, mode);
          auto [vec, norm] = assemble_kkt_residual(pf.params, pf.activation,
                                                   data, cls, mult, mode);
          report.kkt_residual = norm;
        }
        code = detail::verdict_exit_code(verdict.status);
        out << "check " << report.loss << ": " << report.verdict << " (n1="
            << cls.n1() << " n2=" << cls.n2() << " n3=" << cls.n3()
            << ", residual_norm=" << detail::short_num(verdict.residual_norm)
            << ")\n";
      } catch (const DegenerateProfileError& e) {
        report.verdict = "degenerate";
        report.note = e.what();
        code = 3;
        out << "check " << report.loss << ": degenerate (z_max="
            << detail::short_num(profile.z_max) << " within tolerance)\n";
      }
    } else if (app.got_subcommand(bisect_cmd)) {
      report.command = "solve-bisect";
      Activation act = Activation::from_name(activation_name);
      report.activation = act.name();
      Dataset data = load_dataset(data_path);
      if (!(eps > 0.0)) throw OutOfRangeError("eps must be > 0");
      BisectionResult res = bisect_uniform_no_hidden(data, act, eps);
      report.z_star = res.z_star;
      report.iterations = res.iterations;
      report.params = params_to_json(res.params, act);
      out << "solve-bisect: z_star=" << detail::short_num(res.z_star)
          << " iterations=" << res.iterations << "\n";
    } else if (app.got_subcommand(grad_cmd)) {
      report.command = "grad-check";
      ParamsFile pf = load_params(params_path);
      Dataset data = load_dataset(data_path);
      report.activation = pf.activation.name();
      GradCheckReport gr = grad_check(pf.params, pf.activation, data, fd_step);
      report.grad_max_rel_error = gr.max_rel_error;
      report.grad_passed = gr.passed;
      out << "grad-check: max_rel_error="
          << detail::short_num(gr.max_rel_error)
          << (gr.passed ? " ok" : " above threshold") << "\n";
    } else if (app.got_subcommand(oracle_cmd)) {
      report.command = "oracle";
      LossMode mode = detail::parse_loss(loss_name);
      report.loss = loss_mode_name(mode);
      Activation act = Activation::from_name(activation_name);
      report.activation = act.name();
      Architecture arch;
      if (arch_name == "no_hidden")
        arch = Architecture::no_hidden;
      else if (arch_name == "one_hidden")
        arch = Architecture::one_hidden;
      else
        throw OutOfRangeError("arch must be 'no_hidden' or 'one_hidden'");
      Dataset data = load_dataset(data_path);
      GridSpec grid = detail::parse_grid(grid_spec);
      OracleResult res = brute_force_oracle(data, act, mode, arch, units, grid);
      report.oracle_loss = res.loss;
      report.params = params_to_json(res.params, act);
      out << "oracle " << report.loss
          << ": loss=" << detail::short_num(res.loss) << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (timings) {
    auto elapsed = std::chrono::steady_clock::now() - started;
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }
  if (!out_path.empty()) {
    try {
      write_report(report, out_path);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return code;
}

}  // namespace nnkkt

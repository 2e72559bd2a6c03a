#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qdefcs/gup.hpp"
#include "qdefcs/observables.hpp"
#include "qdefcs/scan.hpp"
#include "qdefcs/verify.hpp"

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitInvalidArguments = 2;
constexpr int kExitNumericalFailure = 3;

struct OutputOptions {
  std::string path;  // empty = stdout
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--out", out.path, "output path (default stdout)");
  cmd->add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const qdefcs::scan::ScanResult& result, const OutputOptions& out) {
  const std::string payload = out.format == "json" ? qdefcs::scan::to_json(result)
                                                   : qdefcs::scan::to_csv(result);
  if (out.path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + out.path);
  file << payload;
}

void emit_text(const std::string& payload, const std::string& path) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + path);
  file << payload;
}

nlohmann::ordered_json report_json(const qdefcs::DeformationParameter& dp,
                                   std::complex<double> z,
                                   const qdefcs::ObservableReport& rep) {
  nlohmann::ordered_json j;
  j["schema"] = qdefcs::scan::kSchemaTag;
  j["q"] = dp.q;
  j["regime"] = qdefcs::regime_name(dp.regime);
  j["z_re"] = z.real();
  j["z_im"] = z.imag();
  j["t"] = std::norm(z);
  j["n_max"] = rep.n_max;
  j["error_bound"] = rep.error_bound;
  j["mean_n"] = rep.mean_n;
  j["var_n"] = rep.var_n;
  if (std::isnan(rep.mandel_q)) {
    j["mandel_q"] = nullptr;  // undefined at the vacuum
  } else {
    j["mandel_q"] = rep.mandel_q;
  }
  j["metric_omega"] = rep.metric_omega;
  j["mean_x"] = rep.mean_x;
  j["var_x"] = rep.var_x;
  j["ratio_r"] = rep.ratio_r;
  j["snr_sigma"] = rep.snr_sigma;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed coherent state observables"};
  app.require_subcommand(1);

  // ---- scan-t ----
  qdefcs::scan::ScanConfig cfg;
  std::string observable = "mandel";
  std::string phase = "imag";
  OutputOptions scan_t_out;
  CLI::App* scan_t_cmd =
      app.add_subcommand("scan-t", "tabulate an observable over a t = |z|^2 grid");
  scan_t_cmd->add_option("--q", cfg.q_list, "deformation parameter(s), repeatable")
      ->expected(-1);
  scan_t_cmd->add_option("--t-start", cfg.t_start, "grid start");
  scan_t_cmd->add_option("--t-stop", cfg.t_stop, "grid stop");
  scan_t_cmd->add_option("--t-count", cfg.t_count, "grid point count");
  scan_t_cmd->add_option("--phase", phase, "z placement: real or imag axis")
      ->check(CLI::IsMember({"real", "imag"}));
  scan_t_cmd->add_option("--observable", observable, "observable to tabulate")
      ->check(CLI::IsMember({"mandel", "metric", "ratio", "snr"}));
  scan_t_cmd->add_option("--tol", cfg.tolerance, "certified error bound per row");
  scan_t_cmd->add_option("--guard", cfg.disc_guard, "disc guard fraction");
  scan_t_cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  add_output_flags(scan_t_cmd, scan_t_out);

  // ---- scan-z ----
  double z_q = 0.96;
  std::size_t nr = 50, nphi = 50;
  double z_tol = 1e-10, z_guard = 0.9, z_tmax = 0.0;
  unsigned z_threads = 0;
  OutputOptions scan_z_out;
  CLI::App* scan_z_cmd = app.add_subcommand(
      "scan-z", "tabulate sigma_q and 4<N>_q over a polar grid in the z plane");
  scan_z_cmd->add_option("--q", z_q, "deformation parameter");
  scan_z_cmd->add_option("--nr", nr, "radial resolution");
  scan_z_cmd->add_option("--nphi", nphi, "angular resolution (first quadrant)");
  scan_z_cmd->add_option("--tol", z_tol, "certified error bound per row");
  scan_z_cmd->add_option("--guard", z_guard, "|z| guard fraction of the disc radius");
  scan_z_cmd->add_option("--t-max", z_tmax,
                         "cap on t = |z|^2 (required to bound the grid for q >= 1)");
  scan_z_cmd->add_option("--threads", z_threads, "worker threads (0 = auto)");
  add_output_flags(scan_z_cmd, scan_z_out);

  // ---- gup ----
  qdefcs::gup::GupParameters gp{-1.0, -1.0, 1.0, 1.0, 1.0};
  std::string gup_out_path;
  CLI::App* gup_cmd = app.add_subcommand(
      "gup", "deformed-commutator parameter mapping (alpha, beta < 0 branch)");
  gup_cmd->add_option("--alpha", gp.alpha, "coefficient of x^2 in [x,p]")->required();
  gup_cmd->add_option("--beta", gp.beta, "coefficient of p^2 in [x,p]")->required();
  gup_cmd->add_option("--hbar", gp.hbar, "action scale");
  gup_cmd->add_option("--m", gp.m, "oscillator mass");
  gup_cmd->add_option("--omega", gp.omega, "oscillator frequency");
  gup_cmd->add_option("--out", gup_out_path, "output path (default stdout)");

  // ---- verify ----
  std::string profile_name = "fast";
  bool strict_flag = false;
  unsigned verify_threads = 0;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the numerical verification suite");
  verify_cmd->add_option("--profile", profile_name, "fast or strict")
      ->check(CLI::IsMember({"fast", "strict"}));
  verify_cmd->add_flag("--strict", strict_flag, "shorthand for --profile strict");
  verify_cmd->add_option("--threads", verify_threads, "worker threads (0 = auto)");

  // ---- report ----
  double rep_q = 0.96, rep_zre = 0.0, rep_zim = 0.0;
  double rep_tol = qdefcs::kDefaultTolerance, rep_guard = qdefcs::kDefaultDiscGuard;
  std::string report_out_path;
  CLI::App* report_cmd =
      app.add_subcommand("report", "all observables at one (q, z) point as JSON");
  report_cmd->add_option("--q", rep_q, "deformation parameter")->required();
  report_cmd->add_option("--z-re", rep_zre, "Re z");
  report_cmd->add_option("--z-im", rep_zim, "Im z");
  report_cmd->add_option("--tol", rep_tol, "certified error bound");
  report_cmd->add_option("--guard", rep_guard, "disc guard fraction");
  report_cmd->add_option("--out", report_out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidArguments;
  }

  try {
    if (scan_t_cmd->parsed()) {
      cfg.phase = phase == "real" ? qdefcs::Phase::RealZ : qdefcs::Phase::ImagZ;
      if (observable == "mandel") cfg.observable = qdefcs::scan::Observable::Mandel;
      else if (observable == "metric") cfg.observable = qdefcs::scan::Observable::MetricFactor;
      else if (observable == "ratio") cfg.observable = qdefcs::scan::Observable::VarianceRatio;
      else cfg.observable = qdefcs::scan::Observable::Snr;
      emit(qdefcs::scan::scan_t(cfg), scan_t_out);
    } else if (scan_z_cmd->parsed()) {
      const qdefcs::DeformationParameter dp(z_q);
      emit(qdefcs::scan::scan_z(dp, nr, nphi, z_tol, z_guard, z_tmax, z_threads),
           scan_z_out);
    } else if (gup_cmd->parsed()) {
      const qdefcs::DeformationParameter dq = qdefcs::gup::q_from_alpha_beta(gp);
      nlohmann::ordered_json j;
      j["schema"] = qdefcs::scan::kSchemaTag;
      j["q"] = dq.q;
      j["regime"] = qdefcs::regime_name(dq.regime);
      j["u"] = gp.hbar * std::sqrt(std::fabs(gp.alpha) * std::fabs(gp.beta));
      j["effective_frequency"] = qdefcs::gup::effective_frequency(dq, gp.omega);
      j["isotropy_mismatch"] = qdefcs::gup::check_isotropy(gp);
      j["minimal_uncertainty"] = qdefcs::gup::minimal_uncertainty_exists(gp.alpha, gp.beta);
      emit_text(j.dump(2) + "\n", gup_out_path);
    } else if (verify_cmd->parsed()) {
      const auto profile = (strict_flag || profile_name == "strict")
                               ? qdefcs::verify::Profile::Strict
                               : qdefcs::verify::Profile::Fast;
      qdefcs::verify::Options options;
      options.threads = verify_threads;
      const qdefcs::verify::Report report = qdefcs::verify::run(profile, options);
      std::cout << qdefcs::verify::format(report);
      if (!report.all_passed()) return kExitVerifyFailure;
    } else if (report_cmd->parsed()) {
      const qdefcs::DeformationParameter dp(rep_q);
      const std::complex<double> z{rep_zre, rep_zim};
      const qdefcs::ObservableReport rep = qdefcs::report_at(dp, z, rep_tol, rep_guard);
      emit_text(report_json(dp, z, rep).dump(2) + "\n", report_out_path);
    }
  } catch (const qdefcs::InvalidGupParamsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  } catch (const qdefcs::OutOfDiscError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const qdefcs::NonConvergentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return 0;
}

// fraczeta command-line front end.
//
//   fraczeta <command> --config <path|preset> [--out dir] [--gamma x]
//            [--grid re_lo:re_hi:step,im_lo:im_hi:step] [--window t_lo:t_hi]
//            [--mode lemma|expbounds]
//
// Exit codes: 0 ok, 1 failed check, 2 config error, 3 non-convergence.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraczeta/acceptance.hpp"
#include "fraczeta/fraczeta.hpp"

namespace fz = fraczeta;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kConfig = 2, kNumeric = 3 };

struct Options {
  std::string command;
  std::string config;
  std::string out = ".";
  std::optional<double> gamma;
  std::string grid;
  std::string window;
  std::string mode;
};

std::vector<double> split_numbers(const std::string& text, char sep, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(sep, pos);
    const auto piece = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      out.push_back(fz::parse_real(fz::json(piece), what));
    } catch (const fz::ConfigError&) {
      throw fz::ConfigError(std::string(what) + ": cannot parse '" + piece + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.size() != expected) throw fz::ConfigError(std::string(what) + ": expected " + std::to_string(expected) + " numbers");
  return out;
}

void apply_overrides(fz::RunConfig& c, const Options& o) {
  if (o.gamma) c.gamma = *o.gamma;
  if (!o.mode.empty()) c.continuation.mode = fz::parse_mode(o.mode);
  if (!o.window.empty()) {
    const auto w = split_numbers(o.window, ':', 2, "--window");
    c.partition_t_lo = w[0];
    c.partition_t_hi = w[1];
    c.weyl_window = {w[0], w[1]};
  }
  if (!o.grid.empty()) {
    const auto comma = o.grid.find(',');
    if (comma == std::string::npos) throw fz::ConfigError("--grid: expected re_lo:re_hi:step,im_lo:im_hi:step");
    const auto re = split_numbers(o.grid.substr(0, comma), ':', 3, "--grid");
    const auto im = split_numbers(o.grid.substr(comma + 1), ':', 3, "--grid");
    c.grid = {re[0], re[1], re[2], im[0], im[1], im[2]};
  }
  fz::validate_config(c);
}

fz::SpectralZeta make_zeta(const fz::RunConfig& c) {
  return {fz::build_spectrum(c), c.model, c.continuation};
}

int run_dims(const fz::RunConfig& c) {
  const auto& m = c.model;
  std::printf("model    %s\n", m.name.c_str());
  std::printf("N        %d\n", m.N);
  std::printf("rho_F    %s\n", fz::format_number(m.rho_F).c_str());
  std::printf("tau      %s\n", fz::format_number(m.tau).c_str());
  std::printf("d_S      %s\n", fz::format_number(m.d_S).c_str());
  std::printf("d_f      %s\n", fz::format_number(m.d_f).c_str());
  std::printf("d_w      %s\n", fz::format_number(m.d_w).c_str());
  std::printf("d_bdry   %s\n", fz::format_number(m.d_boundary).c_str());
  std::printf("spacing  %s\n", fz::format_number(m.lattice_spacing()).c_str());
  return kOk;
}

int run_spectrum(const fz::RunConfig& c, fz::ArtifactSet& out) {
  const auto batch = fz::build_spectrum(c);
  out.write("spectrum.csv", fz::spectrum_csv(batch));
  out.write("spectrum.meta.json", fz::spectrum_meta_json(batch));
  std::printf("%zu eigenvalue pairs, cutoff %s\n", batch.pairs.size(), fz::format_number(batch.cutoff).c_str());
  return kOk;
}

fz::json tail_json(const fz::TailCertificate& t) {
  return {{"c3", t.c3}, {"c4", t.c4}, {"c5", t.c5}, {"c6", t.c6}, {"t_lo", t.t_lo}, {"t_max", t.t_max}, {"verified", t.verified}};
}

int run_partition(const fz::RunConfig& c, fz::ArtifactSet& out) {
  const auto batch = fz::build_spectrum(c);
  const auto grid = fz::trace_grid(batch, c.partition_t_lo, c.partition_t_hi, c.partition_points);
  out.write("trace.csv", fz::trace_csv(grid));
  if (!batch.has_zero_mode()) out.write("tail.json", tail_json(fz::tail_certificate(batch, c.tail_t_max)).dump(2) + "\n");
  int rejected = 0;
  for (const auto& s : grid) rejected += s.accepted ? 0 : 1;
  std::printf("%zu samples, %d above the truncation threshold\n", grid.size(), rejected);
  return kOk;
}

int run_weyl(const fz::RunConfig& c, fz::ArtifactSet& out) {
  const auto batch = fz::build_spectrum(c);
  const auto [lo, hi] = c.weyl_window;
  const auto grid = fz::trace_grid(batch, lo, hi, c.partition_points);
  out.write("weyl.csv", fz::weyl_csv(grid, c.model.d_S / 2.0));
  fz::TowerFitOptions opt;
  opt.n_max = c.n_max;
  const auto profiles = fz::fit_towers(batch, c.model, lo, opt);
  const auto cert = fz::asymptotic_certificate(batch, c.model, profiles.front(), {lo, hi});
  auto j = fz::json::parse(fz::profiles_json(profiles));
  fz::json doc = {{"profiles", j},
                  {"certificate",
                   {{"c1", cert.c1}, {"c2", cert.c2}, {"t_lo", cert.t_lo}, {"t_hi", cert.t_hi},
                    {"positive", cert.positive}, {"sign_change", cert.sign_change}, {"degenerate", cert.degenerate}}}};
  out.write("oscillation.json", doc.dump(2) + "\n");
  const auto& p = profiles.front();
  std::printf("g0 %s  |g1|/g0 %s  fit residual %s\n", fz::format_number(p.g(0).real()).c_str(),
              fz::format_number(std::abs(p.g(1)) / p.g(0).real()).c_str(), fz::format_number(p.fit_residual).c_str());
  for (const auto& pr : profiles)
    for (const auto& w : pr.warnings) std::fprintf(stderr, "warning: tower %d: %s\n", pr.k_index, w.c_str());
  return kOk;
}

int run_zeta_grid(const fz::RunConfig& c, fz::ArtifactSet& out) {
  const auto zeta = make_zeta(c);
  const auto pts = fz::zeta_grid(zeta, c.model, c.grid, c.gamma);
  out.write("zeta_grid.csv", fz::zeta_csv(pts));
  std::printf("%zu grid points\n", pts.size());
  return kOk;
}

int run_poles(const fz::RunConfig& c, fz::ArtifactSet& out) {
  std::optional<fz::SpectralZeta> zeta;
  if (c.spectrum.source != "none") zeta.emplace(make_zeta(c));
  const auto report = fz::build_pole_report(c.model, zeta ? &zeta->engine() : nullptr, c.pole_region, c.gamma,
                                            c.continuation.mode);
  out.write("poles.json", fz::poles_json(report));
  std::printf("%zu predicted, %zu located\n", report.predicted.size(), report.located.size());
  for (const auto& p : report.located) {
    std::printf("  %s %s %si  residue %s\n", fz::format_number(p.position.real()).c_str(),
                p.position.imag() < 0.0 ? "-" : "+", fz::format_number(std::abs(p.position.imag())).c_str(),
                p.residue ? fz::format_number(std::abs(*p.residue)).c_str() : "-");
  }
  return kOk;
}

int run_check(fz::ArtifactSet& out) {
  const fz::acceptance::Fixtures fx;
  const auto results = fz::acceptance::run_acceptance(fx, out.dir() / ".check-scratch");
  std::filesystem::remove_all(out.dir() / ".check-scratch");
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s\n", fz::acceptance::format_line(r).c_str());
    ok = ok && r.passed;
  }
  fz::acceptance::write_check_artifacts(fx, out);
  out.write("acceptance.json", fz::acceptance::summary_json(results));
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral zeta functions of self-similar Laplacians"};
  Options o;
  app.add_option("command", o.command, "dims|spectrum|partition|weyl|zeta-grid|poles|check")
      ->required()
      ->check(CLI::IsMember({"dims", "spectrum", "partition", "weyl", "zeta-grid", "poles", "check"}));
  app.add_option("--config", o.config, "JSON config file or preset name (interval, gasket, toy, toy(N,tau), carpet)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--gamma", o.gamma, "shift gamma >= 0");
  app.add_option("--grid", o.grid, "re_lo:re_hi:step,im_lo:im_hi:step");
  app.add_option("--window", o.window, "t_lo:t_hi");
  app.add_option("--mode", o.mode, "continuation mode")->check(CLI::IsMember({"lemma", "expbounds"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (o.command == "check") {
      // The criteria use their own fixed fixtures; a given config is only validated.
      if (!o.config.empty()) {
        auto config = fz::load_config(o.config);
        apply_overrides(config, o);
      }
      fz::ArtifactSet out(o.out);
      const int rc = run_check(out);
      if (rc == kOk) out.commit();
      return rc;
    }
    if (o.config.empty()) throw fz::ConfigError("--config is required for '" + o.command + "'");
    auto config = fz::load_config(o.config);
    apply_overrides(config, o);
    if (o.command == "dims") return run_dims(config);

    fz::ArtifactSet out(o.out);
    int rc = kOk;
    if (o.command == "spectrum") rc = run_spectrum(config, out);
    else if (o.command == "partition") rc = run_partition(config, out);
    else if (o.command == "weyl") rc = run_weyl(config, out);
    else if (o.command == "zeta-grid") rc = run_zeta_grid(config, out);
    else if (o.command == "poles") rc = run_poles(config, out);
    if (rc == kOk) out.commit();
    return rc;
  } catch (const fz::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const fz::DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const fz::ConvergenceError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kNumeric;
  } catch (const fz::ResourceError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
}

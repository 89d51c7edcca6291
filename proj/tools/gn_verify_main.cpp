// gn-verify: command-line surface over the inequality/eigenvalue verification core.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "gnv/campaign.hpp"
#include "gnv/config.hpp"

namespace fs = std::filesystem;
using namespace gnv;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::config_error, "cannot write " + path.string());
  out << content;
}

int cmd_transforms(const std::string& weight_spec, const std::string& tau_spec, double q,
                   const std::string& out_dir) {
  std::ostringstream csv;
  const int n = 33;
  auto grid = [&](int i) { return 1e-3 * std::pow(1e6, i / double(n - 1)); };  // 1e-3 .. 1e3
  if (!weight_spec.empty()) {
    NamedSpec spec = parse_named_spec(weight_spec);
    double p = 2.0;
    if (auto it = spec.params.find("p"); it != spec.params.end()) p = it->second;
    TransformedWeight tw = instantiate_weight(spec, p);
    csv << "lambda,h,H,T,G\n";
    std::cout << "weight " << spec.raw << "  (" << tw.anchor_note() << ")\n";
    std::cout << "lambda            h               H               T_h             G_h\n";
    for (int i = 0; i < n; ++i) {
      double lam = grid(i);
      if (!tw.weight().domain().contains(lam)) continue;
      double hv = tw.h(lam), Hv = tw.H(lam), Tv = tw.T(lam), Gv = tw.G(lam, p);
      csv << format_double(lam) << ',' << format_double(hv) << ',' << format_double(Hv) << ','
          << format_double(Tv) << ',' << format_double(Gv) << '\n';
      std::printf("%-16.6g %-15.6g %-15.6g %-15.6g %-15.6g\n", lam, hv, Hv, Tv, Gv);
    }
  } else {
    NamedSpec spec = parse_named_spec(tau_spec);
    if (spec.name != "power")
      throw Error(errc::config_error, "tau mode supports power:alpha=... specs");
    DerivedTransforms dt = derive_transforms(power_nonlinearity(spec.params.at("alpha")), q);
    csv << "lambda,k,K,h,H,G\n";
    std::cout << "tau " << spec.raw << " q=" << q << "  (" << dt.anchor_note << ")\n";
    std::cout << "lambda            k               K               h               H               G\n";
    for (int i = 0; i < n; ++i) {
      double lam = grid(i);
      double kv = dt.k ? dt.k(lam) : 0.0, Kv = dt.K ? dt.K(lam) : 0.0;
      double hv = dt.h(lam), Hv = dt.H(lam), Gv = dt.G(lam);
      csv << format_double(lam) << ',' << format_double(kv) << ',' << format_double(Kv) << ','
          << format_double(hv) << ',' << format_double(Hv) << ',' << format_double(Gv) << '\n';
      std::printf("%-16.6g %-15.6g %-15.6g %-15.6g %-15.6g %-15.6g\n", lam, kv, Kv, hv, Hv, Gv);
    }
  }
  if (!out_dir.empty()) write_file(fs::path(out_dir) / "transforms.csv", csv.str());
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out_dir, int jobs,
               double tol_rel, double tol_abs) {
  CampaignConfig cfg = parse_config_file(config_path);
  validate_config(cfg);
  if (tol_rel > 0) cfg.tol.rel = tol_rel;
  if (tol_abs > 0) cfg.tol.abs = tol_abs;
  VerifyCampaignResult res = run_verify_campaign(cfg, jobs);

  std::cout << "verify: " << res.rows.size() << " cases | holds " << res.n_holds
            << " | violated " << res.n_violated << " | inconclusive " << res.n_inconclusive
            << " | errors " << res.n_errors << " | expectation misses " << res.n_unexpected
            << "\n";
  for (const auto& row : res.rows) {
    if (!row.error.empty())
      std::cout << "  case " << row.index << " (" << row.function << " / " << row.weight
                << " / p=" << row.p << "): ERROR " << row.error << "\n";
    else if (row.verdict.pass != Pass::holds || !row.expectation_met)
      std::cout << "  case " << row.index << " (" << row.function << " / " << row.weight
                << " / p=" << row.p << "): " << pass_name(row.verdict.pass)
                << (row.expectation_met ? "" : " [unexpected]") << "\n";
  }
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "verify.csv", verify_csv(res));
    write_file(fs::path(out_dir) / "verify.json", verify_json(res));
    std::cout << "reports written to " << out_dir << "\n";
  }
  return res.exit_code;
}

int cmd_ode(const std::string& config_path, const std::string& model, double t0, double y0,
            double yp0, double t1, double q, const std::string& out_dir) {
  CampaignConfig cfg;
  if (!config_path.empty()) {
    cfg = parse_config_file(config_path);
    validate_config(cfg);
  } else if (!model.empty()) {
    EigBlock block;
    block.kind = EigBlock::Kind::model;
    NamedSpec ms = parse_named_spec(model);
    block.model = ms.name;
    block.model_params = ms.params;
    block.t0 = t0;
    block.y0 = y0;
    block.yp0 = yp0;
    block.t1 = t1;
    block.q = q;
    block.checks = {"identity", "i", "holder"};
    cfg.eig.push_back(block);
    validate_config(cfg);
  } else {
    throw Error(errc::config_error, "ode needs --config or --model");
  }

  OdeCampaignResult res = run_ode_campaign(cfg);
  for (const auto& row : res.rows) {
    std::cout << "problem " << row.index << " [" << row.label << "]"
              << (row.error.empty() ? "" : std::string(" ERROR ") + row.error) << "\n";
    for (const auto& c : row.checks)
      std::cout << "  " << c.check << ": measured " << format_double(c.measured) << "  bound "
                << format_double(c.bound) << "  " << (c.pass ? "pass" : "FAIL") << "  (" << c.note
                << ")\n";
  }
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "ode.csv", ode_csv(res));
    write_file(fs::path(out_dir) / "ode.json", ode_json(res));
    for (const auto& row : res.rows)
      if (!row.solution.empty())
        write_file(fs::path(out_dir) / ("solution_" + std::to_string(row.index) + ".csv"),
                   solution_csv(row));
    std::cout << "reports written to " << out_dir << "\n";
  }
  return res.exit_code;
}

int cmd_counterexample(const std::string& out_dir) {
  CounterexampleReport rep = counterexample_run();
  for (const auto& c : rep.cases) {
    std::cout << "p=" << c.p << " theta=" << c.theta << ": lhs "
              << (c.lhs.divergent() ? "divergent (rate " + format_double(c.lhs.rate_exponent) +
                                          ", expected " + format_double(c.expected_rate) + ")"
                                    : "finite " + format_double(c.lhs.value))
              << ", rhs "
              << (c.rhs.finite() ? "finite " + format_double(c.rhs.value) : "divergent")
              << ", lower bound " << (c.lower_bound_ok ? "ok" : "FAIL") << " -> "
              << (c.ok ? "ok" : "FAIL") << "\n";
  }
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "counterexample.csv", counterexample_csv(rep));
  return rep.all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of weighted interpolation inequalities and ODE estimates"};
  app.require_subcommand(1);
  app.fallthrough();  // global options (--out, --jobs, ...) may follow the subcommand

  std::string out_dir;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  double tol_rel = 0, tol_abs = 0;
  app.add_option("--out", out_dir, "output directory for CSV/JSON reports");
  app.add_option("--jobs", jobs, "worker pool size for matrix campaigns");
  app.add_option("--tol-rel", tol_rel, "override relative verdict tolerance");
  app.add_option("--tol-abs", tol_abs, "override absolute verdict tolerance");

  auto* tr = app.add_subcommand("transforms", "print weight or nonlinearity transform tables");
  std::string weight_spec, tau_spec;
  double q = 2.0;
  tr->add_option("--weight", weight_spec, "weight spec, e.g. power:theta=0.5,p=4");
  tr->add_option("--tau", tau_spec, "nonlinearity spec, e.g. power:alpha=1");
  tr->add_option("--q", q, "exponent q for tau mode");

  auto* ve = app.add_subcommand("verify", "run an inequality fixture matrix from a config");
  std::string config_path;
  ve->add_option("--config", config_path, "campaign config file")->required();

  auto* od = app.add_subcommand("ode", "run eigenvalue-pipeline checks and model integrations");
  std::string ode_config, model;
  double t0 = 0.1, y0 = 1.0, yp0 = 0.0, t1 = 1.0;
  od->add_option("--config", ode_config, "campaign config file with [eig] sections");
  od->add_option("--model", model, "model name (thomas_fermi, emden_fowler, ...)");
  od->add_option("--t0", t0, "initial time");
  od->add_option("--y0", y0, "initial value");
  od->add_option("--yp0", yp0, "initial derivative");
  od->add_option("--t1", t1, "final time");
  od->add_option("--q", q, "exponent q for the estimates");

  auto* ce = app.add_subcommand("counterexample", "reproduce the sine-bump counterexample table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tr->parsed()) {
      if (weight_spec.empty() == tau_spec.empty())
        throw Error(errc::config_error, "transforms needs exactly one of --weight / --tau");
      return cmd_transforms(weight_spec, tau_spec, q, out_dir);
    }
    if (ve->parsed()) return cmd_verify(config_path, out_dir, jobs, tol_rel, tol_abs);
    if (od->parsed()) return cmd_ode(ode_config, model, t0, y0, yp0, t1, q, out_dir);
    if (ce->parsed()) return cmd_counterexample(out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::config_error:
      case errc::bad_params:
      case errc::singular_params:
        return 1;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

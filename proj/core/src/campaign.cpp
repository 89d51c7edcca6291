#include "gnv/campaign.hpp"

#include <array>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace gnv {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

TestFunction instantiate_function(const NamedSpec& spec) {
  return build_family(spec.name, spec.params);
}

TransformedWeight instantiate_weight(const NamedSpec& spec, double p) {
  if (spec.name == "power") {
    auto it = spec.params.find("theta");
    if (it == spec.params.end())
      throw Error(errc::config_error, "power weight needs theta");
    double user_p = p;
    if (auto pp = spec.params.find("p"); pp != spec.params.end()) user_p = pp->second;
    return make_primitive(power_weight(it->second, user_p), Anchor::closed_form());
  }
  Weight w = registry(spec.name, spec.params);
  return make_primitive(w, Anchor::closed_form());
}

EigenProblem instantiate_manufactured(const EigBlock& block) {
  if (block.tau.name != "power")
    throw Error(errc::config_error, "manufactured problems use power nonlinearities");
  auto it = block.tau.params.find("alpha");
  if (it == block.tau.params.end()) throw Error(errc::config_error, "tau spec needs alpha");
  Nonlinearity tau = power_nonlinearity(it->second);
  TestFunction f = instantiate_function(block.f);
  Interval win = block.window;
  if (f.domain().finite()) win = f.domain().intersect(win);

  auto g0 = manufacture(f, tau);
  std::function<double(double)> g = g0;
  if (block.perturb_g != 0.0) {
    double eps = block.perturb_g;
    g = [g0, eps](double x) { return g0(x) + eps; };
  }

  EigenProblem prob{tau, block.q, g, win, f, "manufactured pair", std::nullopt};
  // exact endpoint limits for families with closed-form jets up to the edges
  try {
    double da = win.length() * 1e-12;
    Jet ja = f.eval_jet(win.a + da);
    Jet jb = f.eval_jet(win.b - da);
    prob.endpoints = EndpointData{ja.f, ja.fp, jb.f, jb.fp};
  } catch (const Error&) {
  }
  return prob;
}

void validate_config(const CampaignConfig& cfg) {
  auto wrap = [](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw Error(errc::config_error, what + ": " + e.what());
    }
  };
  for (const auto& block : cfg.cases) {
    for (const auto& fn : block.functions)
      wrap("function '" + fn.raw + "'", [&] { instantiate_function(fn); });
    for (const auto& wt : block.weights)
      for (double p : block.p_values)
        wrap("weight '" + wt.raw + "'", [&] { instantiate_weight(wt, p); });
  }
  for (const auto& block : cfg.eig) {
    if (block.kind == EigBlock::Kind::model)
      wrap("model '" + block.model + "'", [&] { model_registry(block.model, block.model_params); });
    else
      wrap("eig function '" + block.f.raw + "'", [&] { instantiate_function(block.f); });
  }
}

// ---------------------------------------------------------------------------
// verify campaign
// ---------------------------------------------------------------------------

VerifyCampaignResult run_verify_campaign(const CampaignConfig& cfg, int jobs) {
  struct CaseSpec {
    const CaseBlock* block;
    const NamedSpec* fn;
    const NamedSpec* wt;
    double p;
  };
  std::vector<CaseSpec> specs;
  for (const auto& block : cfg.cases)
    for (const auto& fn : block.functions)
      for (const auto& wt : block.weights)
        for (double p : block.p_values) specs.push_back({&block, &fn, &wt, p});

  VerifyCampaignResult res;
  res.rows.resize(specs.size());

  auto run_one = [&](std::size_t i) {
    const CaseSpec& cs = specs[i];
    CaseResult row;
    row.index = i;
    row.function = cs.fn->raw;
    row.weight = cs.wt->raw;
    row.p = cs.p;
    row.regime = cs.block->regime;
    row.expect = cs.block->expect;
    try {
      TestFunction f = instantiate_function(*cs.fn);
      TransformedWeight tw = instantiate_weight(*cs.wt, cs.p);
      Interval window = cs.block->window;
      if (f.domain().finite()) window = f.domain().intersect(window);
      InequalitySpec spec = make_spec(tw, cs.p, window, cs.block->regime);
      spec.tol = cfg.tol;
      row.verdict = verify(f, spec);
      switch (cs.block->expect) {
        case Expectation::holds:
          row.expectation_met = row.verdict.pass == Pass::holds;
          break;
        case Expectation::divergent_lhs:
          row.expectation_met = row.verdict.lhs.divergent() && row.verdict.rhs.finite();
          break;
        case Expectation::any:
          row.expectation_met = true;
          break;
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    res.rows[i] = std::move(row);
  };

  if (jobs <= 1 || specs.size() <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= specs.size()) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(specs.size()));
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& row : res.rows) {
    if (!row.error.empty()) {
      ++res.n_errors;
      continue;
    }
    switch (row.verdict.pass) {
      case Pass::holds: ++res.n_holds; break;
      case Pass::violated: ++res.n_violated; break;
      case Pass::inconclusive: ++res.n_inconclusive; break;
    }
    if (!row.expectation_met) ++res.n_unexpected;
  }
  res.exit_code = res.n_violated > 0 ? 2 : 0;
  return res;
}

// ---------------------------------------------------------------------------
// ODE campaign
// ---------------------------------------------------------------------------

namespace {

bool has_check(const EigBlock& block, const std::string& name) {
  for (const auto& c : block.checks)
    if (c == name) return true;
  return false;
}

OdeResult run_eig_block(const EigBlock& block, std::size_t index) {
  OdeResult row;
  row.index = index;
  try {
    if (block.kind == EigBlock::Kind::model) {
      ModelProblem mp = model_registry(block.model, block.model_params);
      row.label = block.model;
      TestFunction sol = integrate_ivp(mp.tau, mp.g, block.t0, block.y0, block.yp0, block.t1);
      const int n = 400;
      for (int i = 0; i <= n; ++i) {
        double t = block.t0 + (block.t1 - block.t0) * i / n;
        double tt = i == 0 ? t + 1e-12 : (i == n ? t - 1e-12 : t);
        Jet j = sol.eval_jet(tt);
        row.solution.push_back({t, j.f, j.fp, j.fpp});
      }
      EigenProblem prob{mp.tau, block.q, mp.g, Interval(block.t0, block.t1), sol,
                        "integrated model", std::nullopt};
      DerivedTransforms dt = derive_transforms(mp.tau, block.q);
      if (has_check(block, "identity")) {
        double r = identity_residual(prob, dt);
        row.checks.push_back({"identity_residual", r, 1e-8, r < 1e-8, "max relative residual"});
      }
      if (has_check(block, "i")) {
        EstimateI est = estimate_i(prob, dt);
        row.checks.push_back({"estimate_i", est.lhs, est.bound, est.pass,
                              std::string("boundary ") + boundary_cert_name(est.boundary)});
      }
      if (has_check(block, "holder")) {
        HolderResult hr = holder_check(prob, dt);
        row.checks.push_back({"holder", hr.seminorm, hr.bound, hr.pass, "sampled seminorm"});
      }
    } else {
      EigenProblem prob = instantiate_manufactured(block);
      row.label = block.f.raw + " tau=" + block.tau.raw + " q=" + format_double(block.q);
      double alpha = block.tau.params.at("alpha");
      DerivedTransforms dt = derive_transforms(power_nonlinearity(alpha), block.q);
      if (has_check(block, "identity")) {
        double r = identity_residual(prob, dt);
        row.checks.push_back({"identity_residual", r, 1e-10, r < 1e-10,
                              block.perturb_g == 0.0 ? "manufactured pair"
                                                     : "negative control (g perturbed)"});
      }
      if (has_check(block, "i")) {
        EstimateI est = estimate_i(prob, dt);
        row.checks.push_back({"estimate_i", est.lhs, est.bound, est.pass,
                              std::string("boundary ") + boundary_cert_name(est.boundary)});
      }
      if (has_check(block, "holder")) {
        HolderResult hr = holder_check(prob, dt);
        row.checks.push_back({"holder", hr.seminorm, hr.bound, hr.pass, "sampled seminorm"});
      }
      if (has_check(block, "pointwise")) {
        try {
          PointwiseResult pr = pointwise_bound(prob, dt, 0.5 * (prob.window.a + prob.window.b));
          row.checks.push_back(
              {"pointwise", pr.max_violation, pr.tolerance, pr.pass, "max violation"});
        } catch (const Error& e) {
          row.checks.push_back({"pointwise", 0, 0, false, e.what()});
        }
      }
      if (has_check(block, "w2q")) {
        try {
          double mid = 0.5 * (prob.window.a + prob.window.b);
          double x = prob.window.a + 0.75 * prob.window.length();
          W2qResult wr = w2q_bound(prob, dt, mid, x);
          row.checks.push_back({"w2q", wr.lhs, wr.bound, wr.pass, "W^{2,q} norm bound"});
        } catch (const Error& e) {
          row.checks.push_back({"w2q", 0, 0, false, e.what()});
        }
      }
      if (has_check(block, "homog")) {
        EstimateReport er = homogeneous_suite(block.q, alpha, prob);
        row.checks.push_back({"homog_i", er.i.lhs, er.i.bound, er.i.pass,
                              std::string("boundary ") + boundary_cert_name(er.i.boundary)});
        row.checks.push_back(
            {"homog_holder", er.holder.seminorm, er.holder.bound, er.holder.pass, "A_q bound"});
        if (er.pointwise)
          row.checks.push_back({"homog_pointwise", er.pointwise->max_violation,
                                er.pointwise->tolerance, er.pointwise->pass, "alpha < 1 bound"});
      }
    }
    row.all_pass = true;
    for (const auto& c : row.checks) row.all_pass = row.all_pass && c.pass;
  } catch (const Error& e) {
    row.error = e.what();
    row.all_pass = false;
  }
  return row;
}

}  // namespace

OdeCampaignResult run_ode_campaign(const CampaignConfig& cfg) {
  OdeCampaignResult res;
  for (std::size_t i = 0; i < cfg.eig.size(); ++i)
    res.rows.push_back(run_eig_block(cfg.eig[i], i));
  bool all = true;
  for (const auto& row : res.rows) all = all && row.all_pass && row.error.empty();
  res.exit_code = all ? 0 : 2;
  return res;
}

// ---------------------------------------------------------------------------
// renderers
// ---------------------------------------------------------------------------

namespace {

const char* cutoff_status(const CutoffReport& rep) {
  switch (rep.verdict) {
    case CutoffVerdict::finite_limit: return "finite";
    case CutoffVerdict::divergent: return "divergent";
    case CutoffVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double cutoff_value(const CutoffReport& rep) {
  return rep.divergent() ? kInf : rep.value;
}

json cutoff_json(const CutoffReport& rep) {
  json j;
  j["status"] = cutoff_status(rep);
  j["value"] = format_double(cutoff_value(rep));
  j["error"] = format_double(rep.error);
  j["quad_error"] = format_double(rep.quad_error);
  if (rep.divergent()) {
    j["rate_exponent"] = format_double(rep.rate_exponent);
    j["fit_r2"] = format_double(rep.fit_r2);
  }
  json sched = json::array();
  for (const auto& [d, v] : rep.schedule) {
    sched.push_back(json::array({format_double(d), format_double(v)}));
  }
  j["schedule"] = sched;
  return j;
}

json boundary_json(const BoundaryEstimate& be) {
  json j;
  j["endpoint"] = be.endpoint == Endpoint::lower ? "lower" : "upper";
  j["tail_inf"] = format_double(be.tail_inf);
  j["tail_sup"] = format_double(be.tail_sup);
  j["heuristic"] = be.heuristic;
  j["eval_ok"] = be.eval_ok;
  return j;
}

}  // namespace

std::string verify_csv(const VerifyCampaignResult& res) {
  std::ostringstream os;
  os << "index,function,weight,p,regime,expect,lhs_status,lhs_value,lhs_rate,rhs_status,"
        "rhs_value,rhs_rate,constant,defect,slack,member,sufficient_condition,pass,"
        "expectation_met,error\n";
  for (const auto& row : res.rows) {
    os << row.index << ',' << row.function << ',' << row.weight << ','
       << format_double(row.p) << ',' << regime_name(row.regime) << ','
       << expectation_name(row.expect) << ',';
    if (!row.error.empty()) {
      os << ",,,,,,,,,,,," << '"' << row.error << '"' << '\n';
      continue;
    }
    const Verdict& v = row.verdict;
    os << cutoff_status(v.lhs) << ',' << format_double(cutoff_value(v.lhs)) << ','
       << format_double(v.lhs.rate_exponent) << ',' << cutoff_status(v.rhs) << ','
       << format_double(cutoff_value(v.rhs)) << ',' << format_double(v.rhs.rate_exponent) << ','
       << format_double(v.constant) << ',' << format_double(v.defect.value_or(0.0)) << ','
       << format_double(v.slack) << ',' << member_name(v.admissibility.member) << ',';
    switch (v.admissibility.sufficient_condition_used) {
      case SufficientCondition::none: os << "none"; break;
      case SufficientCondition::deriv_support_bounded: os << "deriv_support_bounded"; break;
      case SufficientCondition::mixed_integral_finite: os << "mixed_integral_finite"; break;
      case SufficientCondition::both_integrals_finite: os << "both_integrals_finite"; break;
    }
    os << ',' << pass_name(v.pass) << ',' << (row.expectation_met ? "yes" : "no") << ",\n";
  }
  return os.str();
}

std::string verify_json(const VerifyCampaignResult& res) {
  json root;
  root["kind"] = "verify_campaign";
  root["summary"] = {{"holds", res.n_holds},
                     {"violated", res.n_violated},
                     {"inconclusive", res.n_inconclusive},
                     {"errors", res.n_errors},
                     {"expectation_misses", res.n_unexpected},
                     {"exit_code", res.exit_code}};
  json rows = json::array();
  for (const auto& row : res.rows) {
    json r;
    r["index"] = row.index;
    r["function"] = row.function;
    r["weight"] = row.weight;
    r["p"] = format_double(row.p);
    r["regime"] = regime_name(row.regime);
    r["expect"] = expectation_name(row.expect);
    if (!row.error.empty()) {
      r["error"] = row.error;
      rows.push_back(r);
      continue;
    }
    const Verdict& v = row.verdict;
    r["lhs"] = cutoff_json(v.lhs);
    r["rhs"] = cutoff_json(v.rhs);
    r["constant"] = format_double(v.constant);
    if (v.defect) r["defect"] = format_double(*v.defect);
    r["slack"] = format_double(v.slack);
    r["tolerance_used"] = format_double(v.tolerance_used);
    r["pass"] = pass_name(v.pass);
    r["expectation_met"] = row.expectation_met;
    json adm;
    adm["member"] = member_name(v.admissibility.member);
    adm["structural_ok"] = v.admissibility.structural_ok;
    adm["detail"] = v.admissibility.detail;
    if (v.admissibility.lower_tail) adm["lower_tail"] = boundary_json(*v.admissibility.lower_tail);
    if (v.admissibility.upper_tail) adm["upper_tail"] = boundary_json(*v.admissibility.upper_tail);
    adm["flags"] = {{"nonnegative", v.admissibility.flags.nonnegative},
                    {"strictly_positive", v.admissibility.flags.strictly_positive},
                    {"no_single_zeroes", v.admissibility.flags.no_single_zeroes}};
    const WeightClass& wc = v.admissibility.weight_class;
    adm["weight_class"] = {
        {"bounded_near_zero", wc.bounded_near_zero},
        {"nonincreasing_near_zero", wc.nonincreasing_near_zero},
        {"integrable_near_zero", wc.integrable_near_zero},
        {"T_half_p_h_bounded_near_zero", wc.T_half_p_h_bounded_near_zero},
        {"T_half_p_h_nonincreasing_near_zero", wc.T_half_p_h_nonincreasing_near_zero},
        {"G_bounded_or_nonincreasing_near_zero", wc.G_bounded_or_nonincreasing_near_zero},
        {"epsilon_used", format_double(wc.epsilon_used)}};
    r["admissibility"] = adm;
    r["note"] = v.note;
    rows.push_back(r);
  }
  root["cases"] = rows;
  return root.dump(2) + "\n";
}

std::string ode_csv(const OdeCampaignResult& res) {
  std::ostringstream os;
  os << "index,label,check,measured,bound,pass,note\n";
  for (const auto& row : res.rows) {
    if (!row.error.empty()) {
      os << row.index << ',' << row.label << ",error,,,no," << '"' << row.error << '"' << '\n';
      continue;
    }
    for (const auto& c : row.checks) {
      os << row.index << ',' << row.label << ',' << c.check << ',' << format_double(c.measured)
         << ',' << format_double(c.bound) << ',' << (c.pass ? "yes" : "no") << ',' << '"'
         << c.note << '"' << '\n';
    }
  }
  return os.str();
}

std::string ode_json(const OdeCampaignResult& res) {
  json root;
  root["kind"] = "ode_campaign";
  root["exit_code"] = res.exit_code;
  json rows = json::array();
  for (const auto& row : res.rows) {
    json r;
    r["index"] = row.index;
    r["label"] = row.label;
    if (!row.error.empty()) r["error"] = row.error;
    json checks = json::array();
    for (const auto& c : row.checks) {
      checks.push_back({{"check", c.check},
                        {"measured", format_double(c.measured)},
                        {"bound", format_double(c.bound)},
                        {"pass", c.pass},
                        {"note", c.note}});
    }
    r["checks"] = checks;
    r["all_pass"] = row.all_pass;
    rows.push_back(r);
  }
  root["problems"] = rows;
  return root.dump(2) + "\n";
}

std::string solution_csv(const OdeResult& row) {
  std::ostringstream os;
  os << "t,y,yp,ypp\n";
  for (const auto& s : row.solution)
    os << format_double(s[0]) << ',' << format_double(s[1]) << ',' << format_double(s[2]) << ','
       << format_double(s[3]) << '\n';
  return os.str();
}

std::string counterexample_csv(const CounterexampleReport& rep) {
  std::ostringstream os;
  os << "p,theta,lhs_status,lhs_rate,expected_rate,rhs_status,rhs_value,lower_bound_ok,ok\n";
  for (const auto& c : rep.cases) {
    os << format_double(c.p) << ',' << format_double(c.theta) << ',' << cutoff_status(c.lhs)
       << ',' << format_double(c.lhs.rate_exponent) << ',' << format_double(c.expected_rate)
       << ',' << cutoff_status(c.rhs) << ',' << format_double(cutoff_value(c.rhs)) << ','
       << (c.lower_bound_ok ? "yes" : "no") << ',' << (c.ok ? "yes" : "no") << '\n';
  }
  return os.str();
}

}  // namespace gnv

#include "gnv/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace gnv {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::r3_real_line: return "R3_real_line";
    case Regime::r3_general: return "R3_general";
    case Regime::r4_positive: return "R4_positive";
    case Regime::r4_nonneg_hcont: return "R4_nonneg_Hcont";
    case Regime::r4_nonneg_monotone: return "R4_nonneg_monotone";
    case Regime::r5_double_zeroes: return "R5_double_zeroes";
    case Regime::r5_h_integrable: return "R5_H_integrable";
    case Regime::r5_rg: return "R5_RG";
  }
  return "unknown";
}

Regime regime_from_name(const std::string& name) {
  for (Regime r : {Regime::r3_real_line, Regime::r3_general, Regime::r4_positive,
                   Regime::r4_nonneg_hcont, Regime::r4_nonneg_monotone,
                   Regime::r5_double_zeroes, Regime::r5_h_integrable, Regime::r5_rg})
    if (name == regime_name(r)) return r;
  throw Error(errc::config_error, "unknown regime '" + name + "'");
}

const char* member_name(Member m) {
  switch (m) {
    case Member::yes: return "yes";
    case Member::no: return "no";
    case Member::heuristic_yes: return "heuristic_yes";
    case Member::heuristic_no: return "heuristic_no";
  }
  return "unknown";
}

const char* pass_name(Pass p) {
  switch (p) {
    case Pass::holds: return "holds";
    case Pass::violated: return "violated";
    case Pass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

InequalitySpec make_spec(TransformedWeight w, double p, Interval window, Regime regime) {
  if (p < 2.0) throw Error(errc::bad_params, "the inequality engine requires p >= 2");
  InequalitySpec spec;
  spec.weight = std::move(w);
  spec.p = p;
  spec.window = window;
  spec.regime = regime;
  spec.use_abs_f = InequalitySpec::regime_uses_abs(regime);
  return spec;
}

namespace {

inline double signed_power(double y, double p) {
  // |y|^{p-2} y
  if (y == 0.0) return 0.0;
  return std::pow(std::abs(y), p - 2.0) * y;
}

double weight_argument(const Jet& j, bool use_abs) { return use_abs ? std::abs(j.f) : j.f; }

Interval effective_window(const TestFunction& f, Interval window) {
  if (window.finite()) return window;
  if (f.deriv_support())
    return Interval(std::max(window.a, f.deriv_support()->a),
                    std::min(window.b, f.deriv_support()->b));
  return window;
}

struct RangeInfo {
  double fmin = kInf, fmax = -kInf, abs_max = 0;
};

RangeInfo sampled_range(const TestFunction& f, Interval window) {
  Interval win = effective_window(f, window);
  if (!win.finite()) throw Error(errc::bad_params, "cannot sample range on an infinite window");
  RangeInfo ri;
  const int n = 2048;
  double dx = win.length() / n;
  for (int i = 0; i <= n; ++i) {
    double x = win.a + dx * i;
    if (i == 0) x += dx * 1e-9;
    if (i == n) x -= dx * 1e-9;
    double v = f.value(x);
    ri.fmin = std::min(ri.fmin, v);
    ri.fmax = std::max(ri.fmax, v);
    ri.abs_max = std::max(ri.abs_max, std::abs(v));
  }
  return ri;
}

bool positive_on_grid(const TestFunction& f, Interval window) {
  Interval win = effective_window(f, window);
  const int n = 2048;
  double dx = win.length() / n;
  for (int i = 0; i <= n; ++i) {
    double x = win.a + dx * i;
    if (i == 0) x += dx * 1e-9;
    if (i == n) x -= dx * 1e-9;
    if (!(f.value(x) > 0)) return false;
  }
  for (int k = 1; k <= 40; ++k) {
    double d = win.length() * std::pow(0.5, k + 1);
    if (!(f.value(win.a + d) > 0) || !(f.value(win.b - d) > 0)) return false;
  }
  return true;
}

TestFunction with_extra_knots(const TestFunction& f, std::vector<double> extra) {
  auto base = std::make_shared<TestFunction>(f);
  auto jet = [base](double x) -> Jet { return base->eval_jet(x); };
  std::vector<double> knots = f.knots();
  knots.insert(knots.end(), extra.begin(), extra.end());
  return TestFunction(f.domain(), jet, f.family_tag(), f.deriv_support(), std::move(knots));
}

// Boundary-limit expression of the regime's admissibility class.
std::function<double(double)> boundary_expr(const TestFunction& f, const InequalitySpec& spec) {
  const TransformedWeight& tw = spec.weight;
  double p = spec.p;
  switch (spec.regime) {
    case Regime::r3_real_line:
      return [&f, &tw, p](double x) {
        Jet j = f.eval_jet(x);
        return std::pow(std::abs(j.fp), p - 1.0) * std::abs(tw.H_tilde(j.f));
      };
    case Regime::r3_general:
    case Regime::r4_positive:
      return [&f, &tw, p](double x) {
        Jet j = f.eval_jet(x);
        return signed_power(j.fp, p) * tw.H_tilde(j.f);
      };
    case Regime::r4_nonneg_hcont:
      return [&f, &tw, p](double x) {
        Jet j = f.eval_jet(x);
        return signed_power(j.fp, p) * tw.H_tilde(std::max(j.f, 0.0));
      };
    case Regime::r4_nonneg_monotone:
      // the extension is pinned to H~(0) = 0 in this regime
      return [&f, &tw, p](double x) {
        Jet j = f.eval_jet(x);
        if (j.f <= 0.0) return 0.0;
        return signed_power(j.fp, p) * tw.H(j.f);
      };
    default:
      // section-5 classes: |f'|^{p-2} f' sign(f) H~(|f|), zero where f = 0
      return [&f, &tw, p](double x) {
        Jet j = f.eval_jet(x);
        if (j.f == 0.0) return 0.0;
        double s = j.f > 0 ? 1.0 : -1.0;
        return signed_power(j.fp, p) * s * tw.H_tilde(std::abs(j.f));
      };
  }
}

bool deriv_support_strictly_inside(const TestFunction& f, Interval window) {
  if (!f.deriv_support()) return false;
  const Interval& s = *f.deriv_support();
  bool lower_ok = !window.lower_finite() || window.a < s.a;
  bool upper_ok = !window.upper_finite() || window.b > s.b;
  return lower_ok && upper_ok;
}

}  // namespace

// ---------------------------------------------------------------------------
// integral sides
// ---------------------------------------------------------------------------

CutoffReport lhs_integral(const TestFunction& f, const InequalitySpec& spec) {
  const TransformedWeight& tw = spec.weight;
  bool use_abs = spec.use_abs_f;
  double p = spec.p;
  auto integrand = [&f, &tw, use_abs, p](double x) {
    Jet j = f.eval_jet(x);
    if (j.fp == 0.0) return 0.0;
    return std::pow(std::abs(j.fp), p) * tw.h(weight_argument(j, use_abs));
  };
  CutoffSchedule sched = spec.schedule;
  return integrate_excluding(integrand, f, spec.window,
                             InequalitySpec::regime_restriction(spec.regime), sched, spec.quad);
}

CutoffReport rhs_integral(const TestFunction& f, const InequalitySpec& spec) {
  const TransformedWeight& tw = spec.weight;
  bool use_abs = spec.use_abs_f;
  double p = spec.p;
  auto integrand = [&f, &tw, use_abs, p](double x) {
    Jet j = f.eval_jet(x);
    double arg = weight_argument(j, use_abs);
    double hv = tw.h(arg);
    if (hv == 0.0) return 0.0;
    double inner = std::abs(j.fpp * tw.T(arg));
    return std::pow(inner, 0.5 * p) * hv;
  };
  CutoffSchedule sched = spec.schedule;
  return integrate_excluding(integrand, f, spec.window,
                             InequalitySpec::regime_restriction(spec.regime), sched, spec.quad);
}

double boundary_theta(const TestFunction& f, const TransformedWeight& tw, double p, double r,
                      double R) {
  if (!(r < R)) throw Error(errc::bad_params, "boundary_theta needs r < R");
  Jet jr = f.eval_jet(r);
  Jet jR = f.eval_jet(R);
  const Interval& wd = tw.weight().domain();
  if (!wd.contains(jr.f) || !wd.contains(jR.f))
    throw Error(errc::eval_fail, "f(r) or f(R) leaves the weight domain");
  return signed_power(jR.fp, p) * tw.H(jR.f) - signed_power(jr.fp, p) * tw.H(jr.f);
}

// ---------------------------------------------------------------------------
// admissibility
// ---------------------------------------------------------------------------

AdmissibilityReport check_admissible(const TestFunction& f, const InequalitySpec& spec) {
  AdmissibilityReport rep;
  const TransformedWeight& tw = spec.weight;
  const Interval& wd = tw.weight().domain();
  Interval win = spec.window;
  Interval ewin = effective_window(f, win);

  rep.flags = classify_function(f, win);
  rep.weight_class = classify_weight(tw, spec.p);

  RangeInfo range = sampled_range(f, win);
  std::ostringstream detail;

  bool structural = true;
  switch (spec.regime) {
    case Regime::r3_real_line:
    case Regime::r3_general: {
      // weight domain must cover the sampled range of f
      bool covers = (wd.contains(range.fmin) || range.fmin == wd.a) &&
                    (wd.contains(range.fmax) || range.fmax == wd.b);
      if (!covers) {
        structural = false;
        detail << "range of f leaves the weight domain; ";
      }
      if (!tw.weight().zero_set_countable()) {
        structural = false;
        detail << "h^{-1}(0) not declared countable; ";
      }
      break;
    }
    case Regime::r4_positive:
      if (!positive_on_grid(f, win)) {
        structural = false;
        detail << "f not positive on the sampled window; ";
      }
      break;
    case Regime::r4_nonneg_hcont:
      if (!rep.flags.nonnegative) {
        structural = false;
        detail << "f not certified nonnegative; ";
      }
      if (!rep.weight_class.integrable_near_zero ||
          tw.extension_kind() != ExtensionKind::continuous_limit) {
        structural = false;
        detail << "H does not extend continuously to 0; ";
      }
      break;
    case Regime::r4_nonneg_monotone:
      if (!rep.flags.nonnegative) {
        structural = false;
        detail << "f not certified nonnegative; ";
      }
      if (!rep.weight_class.monotone_regime_ok()) {
        structural = false;
        detail << "h or |T|^{p/2}h neither bounded nor nonincreasing near 0; ";
      }
      break;
    case Regime::r5_double_zeroes: {
      if (!rep.flags.no_single_zeroes) {
        structural = false;
        detail << "f has a single zero; ";
      }
      bool part1 = rep.weight_class.integrable_near_zero &&
                   tw.extension_kind() == ExtensionKind::continuous_limit;
      bool part2 = rep.weight_class.monotone_regime_ok();
      if (!part1 && !part2) {
        structural = false;
        detail << "weight satisfies neither the continuous-extension nor the monotone regime; ";
      }
      break;
    }
    case Regime::r5_h_integrable: {
      bool hz_zero = tw.H_tilde_zero() && std::abs(*tw.H_tilde_zero()) <= 1e-12;
      if (!rep.weight_class.integrable_near_zero ||
          tw.extension_kind() != ExtensionKind::continuous_limit || !hz_zero) {
        structural = false;
        detail << "needs h integrable near 0 with the zero-anchored primitive H(0)=0; ";
      }
      break;
    }
    case Regime::r5_rg: {
      if (!rep.weight_class.rg_regime_ok()) {
        structural = false;
        detail << "weight fails the G_h regime hypotheses; ";
      }
      // epsilon-local finiteness of int |f'|^p G_h(|f|) over {0 < |f| < eps}
      bool any_finite = false;
      for (double frac : {0.5, 0.25, 0.125}) {
        double eps = frac * std::min(1.0, range.abs_max);
        auto bands = superlevel_intervals(f, ewin, eps, Restriction::f_nonzero);
        std::vector<double> edges;
        for (const auto& b : bands) {
          edges.push_back(b.a);
          edges.push_back(b.b);
        }
        TestFunction fk = with_extra_knots(f, edges);
        double p = spec.p;
        auto integrand = [&f, &tw, p, eps](double x) {
          Jet j = f.eval_jet(x);
          double a = std::abs(j.f);
          if (a >= eps || j.fp == 0.0) return 0.0;
          return std::pow(std::abs(j.fp), p) * tw.G(a, p);
        };
        CutoffReport band = integrate_excluding(integrand, fk, ewin, Restriction::f_nonzero,
                                                spec.schedule, spec.quad);
        if (band.finite()) {
          any_finite = true;
          rep.rg_local_report = band;
          detail << "local G-integral finite at eps=" << eps << "; ";
          break;
        }
        if (!rep.rg_local_report) rep.rg_local_report = band;
      }
      if (!any_finite) {
        structural = false;
        detail << "epsilon-local integral of |f'|^p G_h(|f|) diverges on the tested grid; ";
      }
      break;
    }
  }
  rep.structural_ok = structural;

  if (!structural) {
    rep.member = Member::no;
    rep.detail = detail.str();
    return rep;
  }

  // Exact sufficient condition: f' with bounded support strictly inside the window.
  if (deriv_support_strictly_inside(f, win)) {
    try {
      // the boundary expression must be finite at the constant tails
      auto expr = boundary_expr(f, spec);
      double probe = win.upper_finite() ? 0.5 * (f.deriv_support()->b + win.b)
                                        : f.deriv_support()->b + 1.0;
      (void)expr(probe);
      rep.member = Member::yes;
      rep.sufficient_condition_used = SufficientCondition::deriv_support_bounded;
      detail << "f' has bounded support inside the window";
      rep.detail = detail.str();
      return rep;
    } catch (const Error&) {
      // fall through to the heuristic route
    }
  }

  // Heuristic boundary tails.
  auto expr = boundary_expr(f, spec);
  rep.lower_tail = boundary_limit(expr, win, Endpoint::lower);
  rep.upper_tail = boundary_limit(expr, win, Endpoint::upper);
  if (!rep.lower_tail->eval_ok || !rep.upper_tail->eval_ok) {
    rep.member = Member::heuristic_no;
    detail << "boundary expression not evaluable near an endpoint";
    rep.detail = detail.str();
    return rep;
  }

  double mag = 1.0;
  for (const auto& s : rep.lower_tail->samples) mag = std::max(mag, std::abs(s.second));
  for (const auto& s : rep.upper_tail->samples) mag = std::max(mag, std::abs(s.second));
  double tol = 1e-7 * mag;

  bool ok = false;
  switch (spec.regime) {
    case Regime::r3_real_line:
      ok = rep.lower_tail->tail_inf <= tol && rep.upper_tail->tail_inf <= tol;
      break;
    case Regime::r4_nonneg_hcont:
      ok = rep.upper_tail->tail_inf <= tol && rep.lower_tail->tail_sup >= -tol;
      break;
    case Regime::r5_h_integrable:
      ok = rep.upper_tail->tail_inf <= tol && rep.lower_tail->tail_sup >= -tol;
      break;
    case Regime::r5_double_zeroes: {
      bool part1 = rep.weight_class.integrable_near_zero &&
                   tw.extension_kind() == ExtensionKind::continuous_limit;
      if (part1)
        ok = rep.upper_tail->tail_inf <= tol && rep.lower_tail->tail_sup >= -tol;
      else
        ok = rep.upper_tail->tail_inf - rep.lower_tail->tail_sup <= tol;
      break;
    }
    default:
      // one-sided difference: liminf_b - limsup_a <= 0
      ok = rep.upper_tail->tail_inf - rep.lower_tail->tail_sup <= tol;
      break;
  }

  if (!ok && spec.regime == Regime::r3_real_line) {
    // Remark-style fallback: finiteness of int |f'|^{p-1} |H(f)| implies membership.
    auto mixed = [&f, &tw, &spec](double x) {
      Jet j = f.eval_jet(x);
      return std::pow(std::abs(j.fp), spec.p - 1.0) * std::abs(tw.H_tilde(j.f));
    };
    CutoffReport m =
        integrate_excluding(mixed, f, win, Restriction::none, spec.schedule, spec.quad);
    if (m.finite()) {
      rep.member = Member::heuristic_yes;
      rep.sufficient_condition_used = SufficientCondition::mixed_integral_finite;
      detail << "mixed integral int |f'|^{p-1}|H(f)| certified finite";
      rep.detail = detail.str();
      return rep;
    }
  }

  rep.member = ok ? Member::heuristic_yes : Member::heuristic_no;
  detail << "boundary tails: [" << rep.lower_tail->tail_inf << ", " << rep.lower_tail->tail_sup
         << "] at a, [" << rep.upper_tail->tail_inf << ", " << rep.upper_tail->tail_sup
         << "] at b (heuristic)";
  rep.detail = detail.str();
  return rep;
}

// ---------------------------------------------------------------------------
// verdicts
// ---------------------------------------------------------------------------

namespace {

Verdict assemble_verdict(CutoffReport lhs, CutoffReport rhs, double constant,
                         std::optional<double> defect, AdmissibilityReport adm,
                         const Tolerances& tol, std::string note = {}) {
  Verdict v;
  v.lhs = std::move(lhs);
  v.rhs = std::move(rhs);
  v.constant = constant;
  v.defect = defect;
  v.admissibility = std::move(adm);
  v.note = std::move(note);

  double d = defect.value_or(0.0);
  bool member_ok =
      v.admissibility.member == Member::yes || v.admissibility.member == Member::heuristic_yes;

  if (v.lhs.verdict == CutoffVerdict::inconclusive ||
      v.rhs.verdict == CutoffVerdict::inconclusive) {
    v.pass = Pass::inconclusive;
    v.note += (v.note.empty() ? "" : "; ") + std::string("cutoff extrapolation inconclusive");
    return v;
  }
  if (v.lhs.divergent()) {
    v.slack = -kInf;
    if (v.rhs.divergent()) {
      v.pass = Pass::inconclusive;
      v.note += (v.note.empty() ? "" : "; ") +
                std::string("both sides divergent (bound trivially true, not comparable)");
    } else {
      v.pass = member_ok ? Pass::violated : Pass::inconclusive;
      if (!member_ok)
        v.note += (v.note.empty() ? "" : "; ") +
                  std::string("lhs divergent outside the admissible class");
    }
    return v;
  }
  if (v.rhs.divergent()) {
    v.slack = kInf;
    v.pass = Pass::holds;
    return v;
  }

  double bound = constant * v.rhs.value + d;
  v.slack = bound - v.lhs.value;
  double err = 3.0 * (v.lhs.error + constant * v.rhs.error);
  v.tolerance_used =
      tol.rel * std::max(std::abs(v.lhs.value), std::abs(bound)) + tol.abs + err;
  if (v.slack >= -v.tolerance_used) {
    v.pass = Pass::holds;
  } else {
    v.pass = member_ok ? Pass::violated : Pass::inconclusive;
  }
  return v;
}

}  // namespace

Verdict verify(const TestFunction& f, const InequalitySpec& spec) {
  if (!std::isfinite(spec.p)) throw Error(errc::bad_params, "p = infinity: use sup_variant");
  AdmissibilityReport adm = check_admissible(f, spec);
  CutoffReport lhs = lhs_integral(f, spec);
  CutoffReport rhs = rhs_integral(f, spec);
  double constant = std::pow(std::sqrt(spec.p - 1.0), spec.p);
  return assemble_verdict(std::move(lhs), std::move(rhs), constant, std::nullopt, std::move(adm),
                          spec.tol, std::string("regime ") + regime_name(spec.regime));
}

Verdict verify_windowed(const TestFunction& f, const InequalitySpec& spec, double r, double R) {
  if (!(spec.window.contains(r) && spec.window.contains(R) && r < R))
    throw Error(errc::bad_params, "verify_windowed needs window.a < r < R < window.b");
  InequalitySpec sub = spec;
  sub.window = Interval(r, R);
  sub.regime = Regime::r3_general;  // the windowed bound carries no class restriction
  sub.use_abs_f = false;

  // the weight must be evaluable along f([r,R])
  RangeInfo range = sampled_range(f, sub.window);
  const Interval& wd = spec.weight.weight().domain();
  if (!(wd.contains(range.fmin) && wd.contains(range.fmax)))
    throw Error(errc::eval_fail, "f([r,R]) leaves the weight domain");

  double theta = boundary_theta(f, spec.weight, spec.p, r, R);
  auto integrand_restriction_none = [&]() {
    CutoffReport lhs = lhs_integral(f, sub);
    CutoffReport rhs = rhs_integral(f, sub);
    return std::make_pair(std::move(lhs), std::move(rhs));
  };
  auto [lhs, rhs] = integrand_restriction_none();

  AdmissibilityReport adm;
  adm.member = Member::yes;
  adm.structural_ok = true;
  adm.detail = "windowed inequality holds unconditionally on subintervals";
  double constant = std::pow(std::sqrt(spec.p - 1.0), spec.p);
  Verdict v = assemble_verdict(std::move(lhs), std::move(rhs), constant, theta, std::move(adm),
                               spec.tol, "windowed with defect theta(r,R)");
  v.defect_heuristic = false;
  return v;
}

// ---------------------------------------------------------------------------
// section-6 specializations
// ---------------------------------------------------------------------------

Verdict specialize_power(const TestFunction& f, double theta, double p, PowerVariant variant) {
  if (std::abs(theta * p - 1.0) < 1e-12)
    throw Error(errc::singular_params, "theta p = 1: use log_variant");

  auto w = std::make_shared<Weight>(power_weight(theta, p));
  TransformedWeight tw = make_primitive(w, Anchor::closed_form());

  Regime regime;
  switch (variant) {
    case PowerVariant::case1:
      if (!(theta < 1.0 / p))
        throw Error(errc::hypothesis_fail, "variant 1 requires theta < 1/p");
      regime = Regime::r5_h_integrable;
      break;
    case PowerVariant::case2: {
      if (!(theta > 1.0 / p))
        throw Error(errc::hypothesis_fail, "variant 2 requires theta > 1/p");
      FunctionFlags flags = classify_function(f, f.domain());
      if (!flags.no_single_zeroes)
        throw Error(errc::hypothesis_fail, "variant 2 requires f without single zeroes");
      regime = Regime::r5_double_zeroes;
      break;
    }
    case PowerVariant::case3:
      if (!(theta > 1.0 / p))
        throw Error(errc::hypothesis_fail, "variant 3 requires theta > 1/p");
      regime = Regime::r5_rg;
      break;
  }

  InequalitySpec spec = make_spec(tw, p, Interval::real_line(), regime);
  if (f.domain().finite()) spec.window = f.domain();

  AdmissibilityReport adm = check_admissible(f, spec);
  if (variant == PowerVariant::case3 &&
      (!adm.rg_local_report || !adm.rg_local_report->finite()))
    throw Error(errc::hypothesis_fail, "variant 3 local finiteness not certified on the eps grid");

  // the specialized sides carry |1 - theta p|^{p/2} folded into the constant
  auto lhs_fun = [&f, theta, p](double x) {
    Jet j = f.eval_jet(x);
    if (j.fp == 0.0) return 0.0;
    return std::pow(std::abs(j.fp) / std::pow(std::abs(j.f), theta), p);
  };
  auto rhs_fun = [&f, theta, p](double x) {
    Jet j = f.eval_jet(x);
    double num = std::sqrt(std::abs(j.f * j.fpp));
    return std::pow(num / std::pow(std::abs(j.f), theta), p);
  };
  CutoffReport lhs = integrate_excluding(lhs_fun, f, spec.window, Restriction::f_nonzero,
                                         spec.schedule, spec.quad);
  CutoffReport rhs = integrate_excluding(rhs_fun, f, spec.window, Restriction::f_nonzero,
                                         spec.schedule, spec.quad);
  double constant = std::pow((p - 1.0) / std::abs(1.0 - theta * p), 0.5 * p);
  std::ostringstream note;
  note << "power specialization theta=" << theta << " variant " << (static_cast<int>(variant) + 1);
  return assemble_verdict(std::move(lhs), std::move(rhs), constant, std::nullopt, std::move(adm),
                          spec.tol, note.str());
}

SupVerdict sup_variant(const TestFunction& f, double theta) {
  if (theta == 0.0)
    throw Error(errc::hypothesis_fail, "sup variant needs theta != 0 (constant 1/sqrt|theta|)");
  SupVerdict sv;
  sv.constant = 1.0 / std::sqrt(std::abs(theta));

  Interval win = effective_window(f, f.domain().finite() ? f.domain() : Interval::real_line());
  auto lhs_e = [&f, theta](double x) {
    Jet j = f.eval_jet(x);
    return std::abs(j.fp) / std::pow(std::abs(j.f), theta);
  };
  auto rhs_e = [&f, theta](double x) {
    Jet j = f.eval_jet(x);
    return std::sqrt(std::abs(j.f * j.fpp)) / std::pow(std::abs(j.f), theta);
  };

  RangeInfo range = sampled_range(f, win);
  double lhs_prev = 0;
  int growth = 0;
  for (int j = 4; j <= 24; ++j) {
    double floor = range.abs_max * std::pow(0.5, j);
    auto kept = superlevel_intervals(f, win, floor, Restriction::f_nonzero);
    double lhs_sup = 0, rhs_sup = 0;
    for (const auto& piece : kept) {
      const int n = 512;
      double dx = piece.length() / n;
      for (int i = 0; i <= n; ++i) {
        double x = piece.a + dx * i;
        if (i == 0) x += dx * 1e-9;
        if (i == n) x -= dx * 1e-9;
        lhs_sup = std::max(lhs_sup, lhs_e(x));
        rhs_sup = std::max(rhs_sup, rhs_e(x));
      }
    }
    if (j > 8 && lhs_sup > lhs_prev * 1.1) ++growth;
    lhs_prev = lhs_sup;
    sv.lhs_sup = lhs_sup;
    sv.rhs_sup = std::max(sv.rhs_sup, rhs_sup);
  }
  sv.lhs_divergent = growth >= 6;
  if (sv.lhs_divergent) {
    sv.pass = Pass::inconclusive;
    return sv;
  }
  // sampled ess-sups carry grid-resolution error; 1e-3 covers equality cases
  sv.pass = sv.lhs_sup <= sv.constant * sv.rhs_sup * (1.0 + 1e-3) ? Pass::holds : Pass::violated;
  return sv;
}

Verdict log_variant(const TestFunction& f, double p) {
  auto w = std::make_shared<Weight>(log_reciprocal_weight());
  TransformedWeight tw = make_primitive(w, Anchor::closed_form());
  FunctionFlags flags = classify_function(f, f.domain().finite() ? f.domain()
                                                                 : Interval::real_line());
  Regime regime = flags.no_single_zeroes ? Regime::r5_double_zeroes : Regime::r5_rg;
  InequalitySpec spec = make_spec(tw, p, Interval::real_line(), regime);
  if (f.domain().finite()) spec.window = f.domain();
  Verdict v = verify(f, spec);
  v.note = "logarithmic weight variant; " + v.note;
  return v;
}

Verdict exp_variant(const TestFunction& f, double p, double alpha, double beta, int case_no) {
  if (alpha == 0.0 || beta < 1.0)
    throw Error(errc::singular_params, "exp variant needs alpha != 0 and beta >= 1");

  TransformedWeight tw;
  Regime regime;
  std::string note;
  if (case_no == 1) {
    auto w = std::make_shared<Weight>(exponential_weight(alpha, beta));
    tw = make_primitive(w, Anchor::closed_form());
    FunctionFlags flags = classify_function(f, f.domain().finite() ? f.domain()
                                                                   : Interval::real_line());
    regime = flags.no_single_zeroes ? Regime::r5_double_zeroes : Regime::r5_rg;
    note = "exponential variant case 1";
  } else if (case_no == 2) {
    if (!(alpha > 0.0) && beta != 1.0)
      throw Error(errc::hypothesis_fail, "case 2 requires alpha > 0 or beta = 1");
    tw = exponential_shifted_primitive(alpha, beta);
    regime = Regime::r5_h_integrable;
    note = "exponential variant case 2 (shifted primitive H1)";
    // domination step: |H1(|f|)| < H(|f|) wherever f != 0
    auto wstd = std::make_shared<Weight>(exponential_weight(alpha, beta));
    TransformedWeight std_tw = make_primitive(wstd, Anchor::closed_form());
    Interval win = effective_window(f, f.domain().finite() ? f.domain() : Interval::real_line());
    if (!win.finite()) win = Interval(-8, 8);
    const int n = 512;
    for (int i = 1; i < n; ++i) {
      double x = win.a + win.length() * i / n;
      double a = std::abs(f.value(x));
      if (a <= 0) continue;
      if (!(std::abs(tw.H(a)) < std_tw.H(a) + 1e-12))
        throw Error(errc::hypothesis_fail, "domination |H1(|f|)| < H(|f|) failed at a sample");
    }
  } else {
    throw Error(errc::bad_params, "exp variant case must be 1 or 2");
  }

  InequalitySpec spec = make_spec(tw, p, Interval::real_line(), regime);
  if (f.domain().finite()) spec.window = f.domain();
  AdmissibilityReport adm = check_admissible(f, spec);

  // Eq-(6.2)-shaped sides with the weight-specific constant
  auto lhs_fun = [&f, alpha, beta, p](double x) {
    Jet j = f.eval_jet(x);
    if (j.fp == 0.0) return 0.0;
    double a = std::abs(j.f);
    return std::pow(std::abs(j.fp), p) * std::pow(a, beta - 1.0) *
           std::exp(alpha * std::pow(a, beta));
  };
  auto rhs_fun = [&f, alpha, beta, p](double x) {
    Jet j = f.eval_jet(x);
    double a = std::abs(j.f);
    return std::pow(std::abs(j.fpp), 0.5 * p) *
           std::pow(a, (0.5 * p - 1.0) * (1.0 - beta)) * std::exp(alpha * std::pow(a, beta));
  };
  CutoffReport lhs = integrate_excluding(lhs_fun, f, spec.window, Restriction::f_nonzero,
                                         spec.schedule, spec.quad);
  CutoffReport rhs = integrate_excluding(rhs_fun, f, spec.window, Restriction::f_nonzero,
                                         spec.schedule, spec.quad);
  double constant = std::pow(std::sqrt((p - 1.0) / (std::abs(alpha) * beta)), p);
  return assemble_verdict(std::move(lhs), std::move(rhs), constant, std::nullopt, std::move(adm),
                          spec.tol, note);
}

// ---------------------------------------------------------------------------
// counterexample
// ---------------------------------------------------------------------------

CounterexampleCase counterexample_case(double p, double theta) {
  CounterexampleCase cc;
  cc.p = p;
  cc.theta = theta;
  cc.expected_divergent = theta > 1.0 / p;
  cc.expected_rate = theta * p - 1.0;

  TestFunction f = sine_bump();
  auto lhs_fun = [&f, theta, p](double x) {
    Jet j = f.eval_jet(x);
    if (j.fp == 0.0) return 0.0;
    return std::pow(std::abs(j.fp) / std::pow(std::abs(j.f), theta), p);
  };
  auto rhs_fun = [&f, theta, p](double x) {
    Jet j = f.eval_jet(x);
    return std::pow(std::sqrt(std::abs(j.f * j.fpp)) / std::pow(std::abs(j.f), theta), p);
  };
  cc.lhs = integrate_excluding(lhs_fun, f, Interval::real_line(), Restriction::f_nonzero);
  cc.rhs = integrate_excluding(rhs_fun, f, Interval::real_line(), Restriction::f_nonzero);

  // lower-bound machinery on (-1/8, 1/8): |f'|/|f|^theta >= pi sqrt(2) (2 pi)^{-theta} |x|^{-theta}
  cc.lower_bound_ok = true;
  double c_theta = M_PI * std::sqrt(2.0) * std::pow(2.0 * M_PI, -theta);
  for (int i = -200; i <= 200; ++i) {
    if (i == 0) continue;
    double x = i * (0.125 / 201.0);
    Jet j = f.eval_jet(x);
    double lhs_v = std::abs(j.fp) / std::pow(std::abs(j.f), theta);
    double bound = c_theta / std::pow(std::abs(x), theta);
    if (!(lhs_v >= bound * (1.0 - 1e-12))) cc.lower_bound_ok = false;
  }

  if (cc.expected_divergent) {
    bool rate_ok = cc.lhs.divergent() &&
                   std::abs(cc.lhs.rate_exponent - cc.expected_rate) <= 0.1 * cc.expected_rate;
    cc.ok = rate_ok && cc.rhs.finite() && cc.lower_bound_ok;
  } else {
    Verdict v = specialize_power(f, theta, p, PowerVariant::case1);
    cc.holds_verdict = v;
    cc.ok = cc.lhs.finite() && cc.rhs.finite() && v.pass == Pass::holds && cc.lower_bound_ok;
  }
  return cc;
}

CounterexampleReport counterexample_run() {
  CounterexampleReport rep;
  rep.cases.push_back(counterexample_case(4.0, 0.3));
  rep.cases.push_back(counterexample_case(4.0, 0.5));
  rep.cases.push_back(counterexample_case(4.0, 0.1));
  rep.all_ok = true;
  for (const auto& c : rep.cases) rep.all_ok = rep.all_ok && c.ok;
  return rep;
}

}  // namespace gnv

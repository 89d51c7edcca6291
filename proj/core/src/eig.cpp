#include "gnv/eig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <random>
#include <sstream>

namespace gnv {

Nonlinearity power_nonlinearity(double alpha) {
  Nonlinearity nl;
  nl.family = Nonlinearity::Family::power;
  nl.alpha = alpha;
  nl.tau = [alpha](double lambda) { return std::pow(lambda, alpha); };
  nl.tau_prime = [alpha](double lambda) { return alpha * std::pow(lambda, alpha - 1.0); };
  return nl;
}

Nonlinearity custom_nonlinearity(std::function<double(double)> tau,
                                 std::function<double(double)> tau_prime) {
  Nonlinearity nl;
  nl.family = Nonlinearity::Family::custom;
  nl.tau = std::move(tau);
  nl.tau_prime = std::move(tau_prime);
  return nl;
}

const char* boundary_cert_name(BoundaryCert c) {
  switch (c) {
    case BoundaryCert::analytic: return "analytic";
    case BoundaryCert::heuristic: return "heuristic";
    case BoundaryCert::failed: return "failed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

namespace {

constexpr double kTestGridLo = 1e-4;
constexpr double kTestGridHi = 1e4;

void check_positive_tau(const Nonlinearity& nl) {
  for (int k = 0; k <= 64; ++k) {
    double lambda = kTestGridLo * std::pow(kTestGridHi / kTestGridLo, k / 64.0);
    if (!(nl.tau(lambda) > 0))
      throw Error(errc::bad_params, "tau must be positive on (0, inf)");
  }
}

DerivedTransforms power_closed_forms(double alpha, double q) {
  double s = q - 1.0 + alpha * q;
  DerivedTransforms dt;
  dt.q = q;
  dt.alpha = alpha;
  dt.closed_form = true;
  double as = std::abs(s);
  double sgn = s > 0 ? 1.0 : -1.0;
  dt.h = [as, q, alpha](double lambda) {
    return std::pow(as, q) * std::pow(lambda, -q * (alpha + 1.0));
  };
  dt.H = [as, sgn, q, alpha](double lambda) {
    return -sgn * std::pow(as, q - 1.0) * std::pow(lambda, -q * (alpha + 1.0) + 1.0);
  };
  if (alpha == 1.0) {
    double c = std::sqrt(2.0 * q - 1.0);
    dt.G = [c](double lambda) { return c * std::log(lambda); };
  } else {
    double c = std::sqrt(as) * 2.0 / (1.0 - alpha);
    dt.G = [c, alpha](double lambda) { return c * std::pow(lambda, 0.5 * (1.0 - alpha)); };
  }
  if (q > 1.0) {
    double e = alpha * q / (q - 1.0);
    dt.k = [e](double lambda) { return std::pow(lambda, e); };
    double kc = 1.0 / (1.0 + e);
    dt.K = [kc, e](double lambda) { return kc * std::pow(lambda, e + 1.0); };
  }
  std::ostringstream note;
  note << "closed form for tau = lambda^" << alpha << " (G "
       << (alpha == 1.0 ? "log-anchored" : "zero-anchored") << ")";
  dt.anchor_note = note.str();
  return dt;
}

DerivedTransforms generic_transforms(const Nonlinearity& nl, double q,
                                     std::optional<double> K_at_1) {
  DerivedTransforms dt;
  dt.q = q;
  dt.alpha = nl.alpha;
  dt.closed_form = false;
  Interval dom(0.0, kInf);

  if (q == 1.0) {
    if (!nl.tau_prime)
      throw Error(errc::bad_params, "q = 1 requires tau' to be available");
    double sign0 = 0;
    for (int k = 0; k <= 64; ++k) {
      double lambda = kTestGridLo * std::pow(kTestGridHi / kTestGridLo, k / 64.0);
      double tp = nl.tau_prime(lambda);
      if (tp == 0) continue;
      double s = tp > 0 ? 1.0 : -1.0;
      if (sign0 == 0) sign0 = s;
      if (s != sign0)
        throw Error(errc::sign_fail, "tau' changes sign on the test grid (q = 1 branch)");
    }
    auto tau = nl.tau;
    auto taup = nl.tau_prime;
    dt.h = [tau, taup](double lambda) {
      double t = tau(lambda);
      return std::abs(taup(lambda)) / (t * t);
    };
    dt.H = [tau, taup](double lambda) {
      double tp = taup(lambda);
      double s = tp > 0 ? 1.0 : (tp < 0 ? -1.0 : 0.0);
      return -s / tau(lambda);
    };
    dt.anchor_note = "q = 1 branch: h = |tau'|/tau^2";
  } else {
    auto tau = nl.tau;
    double e = q / (q - 1.0);
    auto k = [tau, e](double lambda) { return std::pow(tau(lambda), e); };
    dt.k = k;

    double anchor_value;
    if (K_at_1) {
      anchor_value = *K_at_1;
    } else {
      // keep K of constant (positive) sign down to the bottom of the test grid
      QuadOptions opt;
      double below = integrate(k, Interval(kTestGridLo, 1.0), opt).value;
      anchor_value = below * 1.1 + 1e-6;
    }
    auto prim = std::make_shared<Antiderivative>(k, dom, 1.0, anchor_value);
    auto K = [prim](double lambda) { return (*prim)(lambda); };
    dt.K = K;
    // constant-sign test, skipping values below the table's resolution
    double resolvable = 1e-10 * (std::abs(anchor_value) + 1.0);
    bool pos = false, neg = false;
    for (int j = 0; j <= 32; ++j) {
      double lambda = kTestGridLo * std::pow(kTestGridHi / kTestGridLo, j / 32.0);
      double kv = K(lambda);
      if (kv > resolvable) pos = true;
      if (kv < -resolvable) neg = true;
    }
    if (pos && neg) throw Error(errc::sign_fail, "K changes sign on the test grid");
    double cq = std::pow(q - 1.0, q);
    double cH = std::pow(q - 1.0, q - 1.0);
    dt.h = [K, k, cq, q](double lambda) {
      return cq * std::pow(std::abs(K(lambda)), -q) * k(lambda);
    };
    dt.H = [K, cH, q](double lambda) {
      double Kv = K(lambda);
      double s = Kv > 0 ? 1.0 : -1.0;
      return -s * cH * std::pow(std::abs(Kv), 1.0 - q);
    };
    std::ostringstream note;
    note << "numeric K anchored with K(1) = " << anchor_value;
    dt.anchor_note = note.str();
  }

  // G: primitive of h^{1/(2q)}; zero-anchored when integrable near 0 so that
  // |G| is increasing from 0, else anchored at G(1) = 0.
  auto h = dt.h;
  auto groot = [h, q](double lambda) { return std::pow(h(lambda), 1.0 / (2.0 * q)); };
  CutoffReport tail = cutoff_integral(groot, Interval(0.0, 1.0), /*shrink_lower=*/true);
  if (tail.finite()) {
    auto gprim = std::make_shared<Antiderivative>(groot, dom, 1.0, 0.0);
    double offset = tail.value;  // integral_0^1 h^{1/(2q)}
    dt.G = [gprim, offset](double lambda) { return (*gprim)(lambda) + offset; };
    dt.anchor_note += "; G zero-anchored";
  } else {
    auto gprim = std::make_shared<Antiderivative>(groot, dom, 1.0, 0.0);
    dt.G = [gprim](double lambda) { return (*gprim)(lambda); };
    dt.anchor_note += "; G anchored at G(1) = 0";
  }
  return dt;
}

}  // namespace

DerivedTransforms derive_transforms(const Nonlinearity& tau, double q) {
  if (q < 1.0) throw Error(errc::bad_params, "derive_transforms requires q >= 1");
  check_positive_tau(tau);
  if (tau.family == Nonlinearity::Family::power) {
    double s = q - 1.0 + tau.alpha * q;
    if (std::abs(s) < 1e-12)
      throw Error(errc::alpha_singular,
                  "alpha = -1 + 1/q: K is a shifted logarithm, never of constant sign");
    if (q == 1.0 && tau.alpha == 0.0)
      throw Error(errc::sign_fail, "tau' vanishes identically for alpha = 0, q = 1");
    return power_closed_forms(tau.alpha, q);
  }
  return generic_transforms(tau, q, std::nullopt);
}

DerivedTransforms derive_transforms_numeric(const Nonlinearity& tau, double q, double K_at_1) {
  if (!(q > 1.0)) throw Error(errc::bad_params, "the numeric K pipeline needs q > 1");
  check_positive_tau(tau);
  return generic_transforms(tau, q, K_at_1);
}

// ---------------------------------------------------------------------------
// problems
// ---------------------------------------------------------------------------

std::function<double(double)> manufacture(const TestFunction& f, const Nonlinearity& tau) {
  Interval win = f.domain();
  if (!win.finite()) win = Interval(-8, 8);
  const int n = 512;
  for (int i = 1; i < n; ++i) {
    double x = win.a + win.length() * i / n;
    if (!(f.value(x) > 0))
      throw Error(errc::nonpositive_f, "manufacture needs f > 0 on the window");
  }
  auto base = std::make_shared<TestFunction>(f);
  auto t = tau.tau;
  return [base, t](double x) {
    Jet j = base->eval_jet(x);
    return j.fpp / t(j.f);
  };
}

double identity_residual(const EigenProblem& prob, const DerivedTransforms& dt, int samples) {
  double q = prob.q;
  double worst = 0;
  Interval win = prob.window;
  for (int i = 0; i < samples; ++i) {
    double x = win.a + win.length() * (i + 0.5) / samples;
    Jet j = prob.f.eval_jet(x);
    double e1 = std::pow(std::abs(prob.g(x)), q);
    double e2 = std::pow(std::abs(j.fpp / prob.tau.tau(j.f)), q);
    double e3 = std::pow(std::abs(dt.T(j.f) * j.fpp), q) * dt.h(j.f);
    double scale = std::max({std::abs(e1), std::abs(e2), std::abs(e3), 1e-300});
    worst = std::max(worst, (std::max({e1, e2, e3}) - std::min({e1, e2, e3})) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// adaptive Dormand-Prince 5(4) with quintic-Hermite dense output
// ---------------------------------------------------------------------------

namespace {

struct OdeNode {
  double t, y, v;  // v = y'
};

struct DenseSolution {
  std::vector<OdeNode> nodes;
  std::function<double(double)> g;
  std::function<double(double)> tau;

  double accel(const OdeNode& n) const { return g(n.t) * tau(n.y); }

  Jet eval(double x) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x,
                               [](double t, const OdeNode& n) { return t < n.t; });
    std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    if (i >= nodes.size() - 1) i = nodes.size() - 2;
    const OdeNode& n0 = nodes[i];
    const OdeNode& n1 = nodes[i + 1];
    double h = n1.t - n0.t;
    double s = (x - n0.t) / h;
    double a0 = accel(n0), a1 = accel(n1);

    double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    double H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    double H3 = 10 * s3 - 15 * s4 + 6 * s5;
    double H4 = -4 * s3 + 7 * s4 - 3 * s5;
    double H5 = 0.5 * (s3 - 2 * s4 + s5);
    double y = n0.y * H0 + n0.v * h * H1 + a0 * h * h * H2 + n1.y * H3 + n1.v * h * H4 +
               a1 * h * h * H5;

    double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
    double dH1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    double dH2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
    double dH3 = 30 * s2 - 60 * s3 + 30 * s4;
    double dH4 = -12 * s2 + 28 * s3 - 15 * s4;
    double dH5 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
    double yp = (n0.y * dH0 + n0.v * h * dH1 + a0 * h * h * dH2 + n1.y * dH3 + n1.v * h * dH4 +
                 a1 * h * h * dH5) /
                h;

    // y'' recovered from the equation itself
    double ypp = g(x) * tau(y);
    return {y, yp, ypp};
  }
};

}  // namespace

TestFunction integrate_ivp(const Nonlinearity& tau, const std::function<double(double)>& g,
                           double t0, double y0, double y0p, double t1, double tol) {
  if (!(y0 > 0)) throw Error(errc::bad_params, "integrate_ivp needs y0 > 0");
  if (!(t1 > t0)) throw Error(errc::bad_params, "integrate_ivp needs t1 > t0");

  // Dormand-Prince 5(4) tableau
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  struct State {
    double y, v;
  };
  auto deriv = [&](double t, const State& s) -> State {
    return {s.v, g(t) * tau.tau(s.y)};
  };

  auto sol = std::make_shared<DenseSolution>();
  sol->g = g;
  sol->tau = tau.tau;
  sol->nodes.push_back({t0, y0, y0p});

  State s{y0, y0p};
  double t = t0;
  double h = (t1 - t0) / 100.0;
  const double hmin = 1e-14 * (t1 - t0);
  State k1 = deriv(t, s);
  long steps = 0;
  while (t < t1) {
    if (++steps > 2'000'000) throw Error(errc::step_underflow, "step budget exhausted");
    if (h < hmin) throw Error(errc::step_underflow, "step size underflow near t=" + std::to_string(t));
    if (t + h > t1) h = t1 - t;

    auto stage = [&](double cc, double sy, double sv) -> State {
      State z{s.y + h * sy, s.v + h * sv};
      return deriv(t + cc * h, z);
    };
    State k2 = stage(c2, a21 * k1.y, a21 * k1.v);
    State k3 = stage(c3, a31 * k1.y + a32 * k2.y, a31 * k1.v + a32 * k2.v);
    State k4 = stage(c4, a41 * k1.y + a42 * k2.y + a43 * k3.y,
                     a41 * k1.v + a42 * k2.v + a43 * k3.v);
    State k5 = stage(c5, a51 * k1.y + a52 * k2.y + a53 * k3.y + a54 * k4.y,
                     a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v);
    State k6 = stage(1.0, a61 * k1.y + a62 * k2.y + a63 * k3.y + a64 * k4.y + a65 * k5.y,
                     a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v + a65 * k5.v);
    State ynew{s.y + h * (b1 * k1.y + b3 * k3.y + b4 * k4.y + b5 * k5.y + b6 * k6.y),
               s.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
    State k7 = deriv(t + h, ynew);
    double erry = h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y + e7 * k7.y);
    double errv = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    double sy = tol + tol * std::max(std::abs(s.y), std::abs(ynew.y));
    double sv = tol + tol * std::max(std::abs(s.v), std::abs(ynew.v));
    double err = std::sqrt(0.5 * ((erry / sy) * (erry / sy) + (errv / sv) * (errv / sv)));

    if (err <= 1.0) {
      t += h;
      s = ynew;
      k1 = k7;  // FSAL
      if (!(s.y > 0))
        throw Error(errc::positivity_lost, "solution lost positivity at t=" + std::to_string(t));
      sol->nodes.push_back({t, s.y, s.v});
    }
    double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }

  double lo = t0, hi = t1;
  auto jet = [sol](double x) -> Jet { return sol->eval(x); };
  std::vector<double> knots;
  for (const auto& n : sol->nodes) knots.push_back(n.t);
  return TestFunction(Interval(lo, hi), jet, "ode_solution", std::nullopt, std::move(knots));
}

// ---------------------------------------------------------------------------
// a priori estimates
// ---------------------------------------------------------------------------

namespace {

double norm_gq(const EigenProblem& prob, Interval win) {
  auto gq = [&prob](double x) { return std::pow(std::abs(prob.g(x)), prob.q); };
  return integrate(gq, win, {}, prob.f.knots()).value;
}

std::uint64_t sampling_seed() {
  if (const char* env = std::getenv("GN_VERIFY_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 42;
}

}  // namespace

BoundaryCert check_boundary_condition(const EigenProblem& prob, const DerivedTransforms& dt,
                                      double* value) {
  double q = prob.q;
  auto term = [&dt, q](double fv, double fpv) {
    if (fpv == 0.0) return 0.0;
    return std::pow(std::abs(fpv), 2.0 * q - 2.0) * fpv * dt.H(fv);
  };
  if (prob.endpoints) {
    double tb = term(prob.endpoints->f_b, prob.endpoints->fp_b);
    double ta = term(prob.endpoints->f_a, prob.endpoints->fp_a);
    double v = tb - ta;
    if (value) *value = v;
    double scale = std::max({std::abs(tb), std::abs(ta), 1.0});
    return v <= 1e-12 * scale ? BoundaryCert::analytic : BoundaryCert::failed;
  }
  auto expr = [&prob, &term](double x) {
    Jet j = prob.f.eval_jet(x);
    return term(j.f, j.fp);
  };
  BoundaryEstimate lo = boundary_limit(expr, prob.window, Endpoint::lower);
  BoundaryEstimate hi = boundary_limit(expr, prob.window, Endpoint::upper);
  if (!lo.eval_ok || !hi.eval_ok) return BoundaryCert::failed;
  double mag = 1.0;
  for (const auto& s : lo.samples) mag = std::max(mag, std::abs(s.second));
  for (const auto& s : hi.samples) mag = std::max(mag, std::abs(s.second));
  double v = hi.tail_inf - lo.tail_sup;
  if (value) *value = v;
  return v <= 1e-7 * mag ? BoundaryCert::heuristic : BoundaryCert::failed;
}

EstimateI estimate_i(const EigenProblem& prob, const DerivedTransforms& dt) {
  EstimateI est;
  double q = prob.q;
  Interval win = prob.window;
  auto lhs_fun = [&prob, &dt, q](double x) {
    Jet j = prob.f.eval_jet(x);
    if (j.fp == 0.0) return 0.0;
    return std::pow(std::abs(j.fp), 2.0 * q) * dt.h(j.f);
  };
  QuadratureResult lhs = integrate(lhs_fun, win, {}, prob.f.knots());
  est.lhs = lhs.value;
  est.bound = std::pow(2.0 * q - 1.0, q) * norm_gq(prob, win);
  est.ratio = est.bound != 0 ? est.lhs / est.bound : (est.lhs == 0 ? 0 : kInf);
  est.boundary = check_boundary_condition(prob, dt);
  est.pass = est.lhs <= est.bound * (1.0 + 1e-6) + 3.0 * lhs.error_estimate + 1e-12;
  return est;
}

HolderResult holder_check(const EigenProblem& prob, const DerivedTransforms& dt,
                          int pair_samples) {
  HolderResult hr;
  double q = prob.q;
  hr.exponent = 1.0 - 1.0 / (2.0 * q);
  Interval win = prob.window;
  auto F = [&prob, &dt](double x) { return dt.G(prob.f.value(x)); };

  std::mt19937_64 rng(sampling_seed());
  std::uniform_real_distribution<double> uni(win.a + 1e-9 * win.length(),
                                             win.b - 1e-9 * win.length());
  auto consider = [&](double x, double y) {
    if (x == y) return;
    double v = std::abs(F(x) - F(y)) / std::pow(std::abs(x - y), hr.exponent);
    if (v > hr.seminorm) {
      hr.seminorm = v;
      hr.x_argmax = x;
      hr.y_argmax = y;
    }
  };
  for (int i = 0; i < pair_samples; ++i) consider(uni(rng), uni(rng));
  // structured near-diagonal pairs: the quotient is often extremal as y -> x
  const int grid = 64;
  for (int i = 0; i <= grid; ++i) {
    double x = win.a + win.length() * (i + 0.25) / (grid + 1);
    for (int j = 2; j <= 30; ++j) {
      double d = win.length() * std::pow(0.5, j);
      if (x + d < win.b) consider(x, x + d);
    }
  }
  hr.bound = std::sqrt(2.0 * q - 1.0) * std::pow(norm_gq(prob, win), 1.0 / (2.0 * q));
  hr.pass = hr.seminorm <= hr.bound * (1.0 + 1e-6);
  return hr;
}

namespace {

// |G| must be strictly increasing on (0, top); returns |G|^{-1}(target) by bisection.
double abs_g_inverse(const DerivedTransforms& dt, double target, double scale_hint) {
  auto absG = [&dt](double lambda) { return std::abs(dt.G(lambda)); };
  double hi = std::max(scale_hint, 1.0);
  int guard = 0;
  while (absG(hi) < target) {
    hi *= 2.0;
    if (++guard > 200) throw Error(errc::not_proper, "|G| does not reach the required level");
  }
  double lo = hi;
  guard = 0;
  while (absG(lo) > target) {
    lo *= 0.5;
    if (++guard > 2000) break;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (absG(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void require_abs_g_increasing(const DerivedTransforms& dt, double lo, double hi) {
  double prev = -kInf;
  double sign0 = 0;
  for (int k = 0; k <= 64; ++k) {
    double lambda = lo * std::pow(hi / lo, k / 64.0);
    double gv = dt.G(lambda);
    double s = gv > 0 ? 1.0 : (gv < 0 ? -1.0 : 0.0);
    if (s != 0) {
      if (sign0 == 0) sign0 = s;
      if (s != sign0)
        throw Error(errc::not_monotone, "G changes sign on the needed range");
    }
    double a = std::abs(gv);
    if (a <= prev * (1.0 + 1e-12) && k > 0)
      throw Error(errc::not_monotone, "|G| is not strictly increasing on the needed range");
    prev = a;
  }
}

}  // namespace

PointwiseResult pointwise_bound(const EigenProblem& prob, const DerivedTransforms& dt, double c) {
  if (!prob.window.contains(c)) throw Error(errc::bad_params, "anchor c outside the window");
  PointwiseResult pr;
  double q = prob.q;
  Interval win = prob.window;
  double fmax = 0;
  for (int i = 1; i < 256; ++i)
    fmax = std::max(fmax, prob.f.value(win.a + win.length() * i / 256.0));
  require_abs_g_increasing(dt, 1e-9 * std::max(fmax, 1.0), 2.0 * fmax);

  double gq = norm_gq(prob, win);
  double amp = std::sqrt(2.0 * q - 1.0) * std::pow(gq, 1.0 / (2.0 * q));
  double Gc = std::abs(dt.G(prob.f.value(c)));

  pr.tolerance = 1e-6 * std::max(1.0, fmax) + 1e-9;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    double x = win.a + win.length() * (i + 0.5) / n;
    double target = Gc + std::pow(std::abs(x - c), 1.0 - 1.0 / (2.0 * q)) * amp;
    double bound = abs_g_inverse(dt, target, fmax);
    pr.max_violation = std::max(pr.max_violation, std::abs(prob.f.value(x)) - bound);
  }
  pr.pass = pr.max_violation <= pr.tolerance;
  return pr;
}

PointwiseResult pointwise_bound_endpoint(const EigenProblem& prob, const DerivedTransforms& dt,
                                         Endpoint e) {
  PointwiseResult pr;
  double q = prob.q;
  Interval win = prob.window;
  double fmax = 0;
  for (int i = 1; i < 256; ++i)
    fmax = std::max(fmax, prob.f.value(win.a + win.length() * i / 256.0));
  require_abs_g_increasing(dt, 1e-9 * std::max(fmax, 1.0), 2.0 * fmax);

  // continuation of f to the endpoint via the tail of G(f)
  double edge = e == Endpoint::lower ? win.a : win.b;
  double f_edge;
  if (prob.endpoints) {
    f_edge = e == Endpoint::lower ? prob.endpoints->f_a : prob.endpoints->f_b;
  } else {
    double d = 1e-7 * win.length();
    f_edge = prob.f.value(e == Endpoint::lower ? win.a + d : win.b - d);
  }
  double gq = norm_gq(prob, win);
  double amp = std::sqrt(2.0 * q - 1.0) * std::pow(gq, 1.0 / (2.0 * q));
  double Ge = std::abs(dt.G(f_edge));

  pr.tolerance = 1e-6 * std::max(1.0, fmax) + 1e-9;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    double x = win.a + win.length() * (i + 0.5) / n;
    double target = Ge + std::pow(std::abs(x - edge), 1.0 - 1.0 / (2.0 * q)) * amp;
    double bound = abs_g_inverse(dt, target, fmax);
    pr.max_violation = std::max(pr.max_violation, std::abs(prob.f.value(x)) - bound);
  }
  pr.pass = pr.max_violation <= pr.tolerance;
  return pr;
}

W2qResult w2q_bound(const EigenProblem& prob, const DerivedTransforms& dt, double c, double x) {
  if (!(prob.window.contains(c) && prob.window.contains(x) && c < x))
    throw Error(errc::bad_params, "w2q_bound needs window.a < c < x < window.b");
  W2qResult wr;
  double q = prob.q;
  Interval win = prob.window;

  auto fppq = [&prob, q](double t) {
    return std::pow(std::abs(prob.f.eval_jet(t).fpp), q);
  };
  wr.lhs = std::pow(integrate(fppq, Interval(win.a, x), {}, prob.f.knots()).value, 1.0 / q);

  double gq_all = norm_gq(prob, win);
  wr.A_c = std::abs(dt.G(prob.f.value(c))) +
           std::pow(std::abs(x - c), 1.0 - 1.0 / (2.0 * q)) * std::sqrt(2.0 * q - 1.0) *
               std::pow(gq_all, 1.0 / (2.0 * q));

  // D_c = sup of tau(G^{-1}(y)) over y in (-A_c, A_c) intersected with range |G|
  double fmax = 0;
  for (int i = 1; i < 256; ++i)
    fmax = std::max(fmax, prob.f.value(win.a + win.length() * i / 256.0));
  require_abs_g_increasing(dt, 1e-9 * std::max(fmax, 1.0), 2.0 * fmax);
  double sup = 0;
  double prev = -1;
  int growing = 0;
  const int n = 512;
  for (int i = n; i >= 1; --i) {
    double y = wr.A_c * i / n;
    double lambda = abs_g_inverse(dt, y, fmax);
    double tv = prob.tau.tau(lambda);
    sup = std::max(sup, tv);
    if (prev >= 0 && tv > prev * (1.0 + 1e-9)) ++growing;
    else growing = 0;
    if (growing > 64 && tv > 1e6 * std::max(1.0, sup / 10))
      throw Error(errc::not_proper, "tau o G^{-1} grows without bound toward 0");
    prev = tv;
  }
  wr.D_c = sup;

  auto gql = [&prob, q](double t) { return std::pow(std::abs(prob.g(t)), q); };
  double gq_sub = std::pow(integrate(gql, Interval(win.a, x), {}, prob.f.knots()).value, 1.0 / q);
  wr.bound = wr.D_c * gq_sub;
  wr.pass = wr.lhs <= wr.bound * (1.0 + 1e-6) + 1e-12;
  return wr;
}

EstimateConstants homogeneous_constants(double q, double alpha) {
  double s = q - 1.0 + alpha * q;
  if (std::abs(s) < 1e-12) throw Error(errc::alpha_singular, "alpha = -1 + 1/q");
  EstimateConstants ec;
  ec.q = q;
  ec.two_q_minus_one_pow_q = std::pow(2.0 * q - 1.0, q);
  ec.sqrt_two_q_minus_one = std::sqrt(2.0 * q - 1.0);
  ec.homog_constant_i = std::pow((2.0 * q - 1.0) / std::abs(s), q);
  ec.A_q = std::sqrt(2.0 * q - 1.0) / std::sqrt(std::abs(s)) * std::abs(0.5 * (1.0 - alpha));
  return ec;
}

EstimateReport estimate_report(const EigenProblem& prob, const DerivedTransforms& dt) {
  EstimateReport er;
  er.constants = homogeneous_constants(prob.q, dt.alpha);
  er.identity_residual_value = identity_residual(prob, dt);
  er.i = estimate_i(prob, dt);
  er.holder = holder_check(prob, dt);
  double mid = 0.5 * (prob.window.a + prob.window.b);
  try {
    er.pointwise = pointwise_bound(prob, dt, mid);
  } catch (const Error& e) {
    if (e.code() != errc::not_monotone) throw;
  }
  if (er.pointwise) {
    double xq = prob.window.a + 0.75 * prob.window.length();
    try {
      er.w2q = w2q_bound(prob, dt, mid, xq);
    } catch (const Error& e) {
      if (e.code() != errc::not_proper) throw;
    }
  }
  er.all_pass = er.i.pass && er.holder.pass && (!er.pointwise || er.pointwise->pass) &&
                (!er.w2q || er.w2q->pass);
  return er;
}

EstimateReport homogeneous_suite(double q, double alpha, const EigenProblem& prob) {
  EstimateReport er;
  er.constants = homogeneous_constants(q, alpha);
  DerivedTransforms dt = derive_transforms(power_nonlinearity(alpha), q);
  er.identity_residual_value = identity_residual(prob, dt);
  Interval win = prob.window;

  // i) homogeneous form: int |f'|^{2q} |f|^{-q(alpha+1)} <= ((2q-1)/|s|)^q int |g|^q
  auto lhs_fun = [&prob, q, alpha](double x) {
    Jet j = prob.f.eval_jet(x);
    if (j.fp == 0.0) return 0.0;
    return std::pow(std::abs(j.fp), 2.0 * q) * std::pow(std::abs(j.f), -q * (alpha + 1.0));
  };
  QuadratureResult lhs = integrate(lhs_fun, win, {}, prob.f.knots());
  er.i.lhs = lhs.value;
  er.i.bound = er.constants.homog_constant_i * norm_gq(prob, win);
  er.i.ratio = er.i.bound != 0 ? er.i.lhs / er.i.bound : (er.i.lhs == 0 ? 0 : kInf);
  er.i.boundary = check_boundary_condition(prob, dt);
  er.i.pass = er.i.lhs <= er.i.bound * (1.0 + 1e-6) + 3.0 * lhs.error_estimate + 1e-12;

  // ii) Holder quotient of f^{(1-alpha)/2} with A_q
  er.holder.exponent = 1.0 - 1.0 / (2.0 * q);
  auto F2 = [&prob, alpha](double x) {
    return std::pow(prob.f.value(x), 0.5 * (1.0 - alpha));
  };
  std::mt19937_64 rng(sampling_seed());
  std::uniform_real_distribution<double> uni(win.a + 1e-9 * win.length(),
                                             win.b - 1e-9 * win.length());
  auto consider = [&](double x, double y) {
    if (x == y) return;
    double v = std::abs(F2(x) - F2(y)) / std::pow(std::abs(x - y), er.holder.exponent);
    if (v > er.holder.seminorm) {
      er.holder.seminorm = v;
      er.holder.x_argmax = x;
      er.holder.y_argmax = y;
    }
  };
  for (int i = 0; i < 2000; ++i) consider(uni(rng), uni(rng));
  for (int i = 0; i <= 64; ++i) {
    double x = win.a + win.length() * (i + 0.25) / 65.0;
    for (int j = 2; j <= 30; ++j) {
      double d = win.length() * std::pow(0.5, j);
      if (x + d < win.b) consider(x, x + d);
    }
  }
  double gq = norm_gq(prob, win);
  er.holder.bound = er.constants.A_q * std::pow(gq, 1.0 / (2.0 * q));
  er.holder.pass = er.holder.seminorm <= er.holder.bound * (1.0 + 1e-6);

  // iii) pointwise bound from the endpoint value when alpha < 1
  if (alpha < 1.0) {
    PointwiseResult pr;
    double f0;
    if (prob.endpoints)
      f0 = prob.endpoints->f_a;
    else
      f0 = prob.f.value(win.a + 1e-7 * win.length());
    double fmax = 0;
    const int n = 200;
    pr.tolerance = 0;
    for (int i = 0; i < n; ++i) {
      double x = win.a + win.length() * (i + 0.5) / n;
      double fx = prob.f.value(x);
      fmax = std::max(fmax, fx);
      double base = std::pow(f0, 0.5 * (1.0 - alpha)) +
                    er.constants.A_q * std::pow(std::abs(x - win.a), 1.0 - 1.0 / (2.0 * q)) *
                        std::pow(gq, 1.0 / (2.0 * q));
      double bound = std::pow(base, 2.0 / (1.0 - alpha));
      pr.max_violation = std::max(pr.max_violation, std::abs(fx) - bound);
    }
    pr.tolerance = 1e-6 * std::max(1.0, fmax) + 1e-9;
    pr.pass = pr.max_violation <= pr.tolerance;
    er.pointwise = pr;
  }

  er.all_pass = er.i.pass && er.holder.pass && (!er.pointwise || er.pointwise->pass);
  return er;
}

// ---------------------------------------------------------------------------
// model registry
// ---------------------------------------------------------------------------

ModelProblem model_registry(const std::string& name,
                            const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it != params.end() ? it->second : fallback;
  };
  ModelProblem mp;
  mp.name = name;
  if (name == "thomas_fermi") {
    mp.tau = power_nonlinearity(1.5);
    mp.g = [](double t) { return std::sqrt(t); };
    return mp;
  }
  if (name == "emden_fowler") {
    double lam = get("lambda", 1.0);
    double gamma = get("gamma", 1.0);
    mp.tau = power_nonlinearity(-gamma);
    mp.g = [lam](double) { return -lam; };
    return mp;
  }
  if (name == "membrane_cap_simplified") {
    mp.tau = power_nonlinearity(-2.0);
    mp.g = [](double t) { return -1.0 / (32.0 * t * t * t); };
    return mp;
  }
  if (name == "thin_film") {
    mp.tau = power_nonlinearity(-0.5);
    mp.g = [](double u) { return -2.0 / (u * u); };
    return mp;
  }
  if (name == "logistic") {
    double b = get("b", 1.0);
    double p = get("p", 2.0);
    mp.tau = power_nonlinearity(p);
    mp.g = [b](double) { return -b; };
    return mp;
  }
  throw Error(errc::bad_params, "unknown model '" + name + "'");
}

}  // namespace gnv

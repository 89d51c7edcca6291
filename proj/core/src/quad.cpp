#include "gnv/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gnv {

namespace {

// 15-point Kronrod / 7-point Gauss pair (Fullerton's 80-digit tables).
const double kXgk[8] = {
    .991455371120812639206854697526329, .949107912342758524526189684047851,
    .864864423359769072789712788640926, .741531185599394439863864773280788,
    .586087235467691130294144838258730, .405845151377397166906606412076961,
    .207784955007898467600689403773245, 0.0};
const double kWgk[8] = {
    .022935322010529224963732008058970, .063092092629978553290700663189204,
    .104790010322250183839876322541518, .140653259715525918745189590510238,
    .169004726639267902826583426598550, .190350578064785409913256402421014,
    .204432940075298892414161999234649, .209482141084727828012999174891714};
const double kWg[4] = {
    .129484966168869693270611432679082, .279705391489276667901467771423780,
    .381830050505118944950369775488975, .417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value, err;
  double resasc;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  double fv[15];
  double fc = f(centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  fv[14] = fc;
  for (int j = 0; j < 7; ++j) {
    double absc = hlgth * kXgk[j];
    double f1 = f(centr - absc);
    double f2 = f(centr + absc);
    fv[j] = f1;
    fv[7 + j] = f2;
    double fsum = f1 + f2;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
  }
  double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[7 + j] - reskh));

  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double epmach = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * resabs, err);
  p.err = err;
  p.resasc = resasc;
  return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, Interval window,
                           const QuadOptions& opt, std::span<const double> knots) {
  if (!window.finite())
    throw Error(errc::bad_params, "integrate requires a finite window; use integrate_improper");

  // pre-split at the interior knots
  std::vector<double> cuts{window.a};
  for (double k : knots)
    if (k > window.a && k < window.b) cuts.push_back(k);
  cuts.push_back(window.b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto cmp = [](const Panel& x, const Panel& y) { return x.err < y.err; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  std::vector<Panel> done;  // panels too narrow to split further

  std::size_t evals = 0;
  double total = 0, toterr = 0;
  auto push = [&](double a, double b) {
    Panel p = gk15(g, a, b);
    evals += 15;
    total += p.value;
    toterr += p.err;
    heap.push(p);
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) push(cuts[i], cuts[i + 1]);

  int splits = 0;
  QuadStatus status = QuadStatus::converged;
  while (toterr > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (evals + 30 > opt.max_evals) {
      status = QuadStatus::max_subdivisions;
      break;
    }
    if (heap.empty()) break;
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // panel no longer splittable in double precision
      done.push_back(worst);
      if (heap.empty()) break;
      continue;
    }
    total -= worst.value;
    toterr -= worst.err;
    push(worst.a, mid);
    push(mid, worst.b);
    ++splits;
  }

  // deterministic re-summation in interval order
  std::vector<Panel> all(std::move(done));
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double value = 0, err = 0, comp = 0;
  for (const auto& p : all) {
    double t = p.value - comp;
    double s = value + t;
    comp = (s - value) - t;
    value = s;
    err += p.err;
  }

  QuadratureResult r;
  r.value = value;
  r.error_estimate = err;
  r.subdivisions = splits;
  r.status = status;
  if (!std::isfinite(value)) r.status = QuadStatus::divergent_suspected;
  return r;
}

QuadratureResult integrate_improper(const std::function<double(double)>& g, Interval window,
                                    const QuadOptions& opt, std::span<const double> knots) {
  if (window.finite()) return integrate(g, window, opt, knots);

  // x = t/(1-t^2) per infinite endpoint, dx = (1+t^2)/(1-t^2)^2 dt
  auto fwd = [](double t) { return t / (1.0 - t * t); };
  auto jac = [](double t) {
    double u = 1.0 - t * t;
    return (1.0 + t * t) / (u * u);
  };
  auto inv = [](double x) {
    if (x == 0.0) return 0.0;
    return (-1.0 + std::sqrt(1.0 + 4.0 * x * x)) / (2.0 * x);
  };

  double shift = 0.0;
  double ta, tb;
  if (!window.lower_finite() && !window.upper_finite()) {
    ta = -1.0;
    tb = 1.0;
  } else if (window.lower_finite()) {
    shift = window.a;
    ta = 0.0;
    tb = 1.0;
  } else {
    shift = window.b;
    ta = -1.0;
    tb = 0.0;
  }
  std::vector<double> tknots;
  for (double k : knots) {
    double t = inv(k - shift);
    if (t > ta && t < tb) tknots.push_back(t);
  }
  auto gt = [&](double t) { return g(shift + fwd(t)) * jac(t); };
  return integrate(gt, Interval(ta, tb), opt, tknots);
}

// ---------------------------------------------------------------------------
// superlevel sets {|f| > delta}
// ---------------------------------------------------------------------------

std::vector<Interval> superlevel_intervals(const TestFunction& f, Interval window, double delta,
                                           Restriction restriction, int grid_n) {
  if (!window.finite()) throw Error(errc::bad_params, "superlevel needs a finite window");
  auto level = [&](double x) {
    double v = f.value(x);
    return (restriction == Restriction::f_positive ? v : std::abs(v)) - delta;
  };

  std::vector<double> xs;
  xs.reserve(grid_n + 8);
  double dx = window.length() / grid_n;
  for (int i = 0; i <= grid_n; ++i) {
    double x = window.a + dx * i;
    if (i == 0) x += dx * 1e-9;
    if (i == grid_n) x -= dx * 1e-9;
    xs.push_back(x);
  }
  for (double k : f.knots())
    if (window.contains(k)) xs.push_back(k);
  // seed with the zeroes of f so that sub-grid crossings of |f| = delta are found
  for (const auto& z : locate_zeros(f, window).zeros) {
    if (window.contains(z.location)) xs.push_back(z.location);
    if (z.kind == ZeroKind::flat_interval) {
      if (window.contains(z.lo)) xs.push_back(z.lo);
      if (window.contains(z.hi)) xs.push_back(z.hi);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double tol = 1e-13 * std::max(1.0, std::abs(window.a) + std::abs(window.b));
  std::vector<Interval> kept;
  double open_at = 0;
  bool open = false;
  double prev_x = xs.front();
  double prev_v = level(prev_x);
  if (prev_v > 0) {
    open = true;
    open_at = window.a;
  }
  auto refine = [&](double lo, double hi, double vlo) {
    // bisect the crossing of level() between lo and hi
    for (int it = 0; it < 100 && hi - lo > tol; ++it) {
      double mid = 0.5 * (lo + hi);
      double vm = level(mid);
      if ((vlo > 0) == (vm > 0)) {
        lo = mid;
        vlo = vm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double x = xs[i];
    double v = level(x);
    if ((prev_v > 0) != (v > 0)) {
      double c = refine(prev_x, x, prev_v);
      if (v > 0) {
        open = true;
        open_at = c;
      } else if (open) {
        if (c > open_at) kept.push_back(Interval(open_at, c));
        open = false;
      }
    }
    prev_x = x;
    prev_v = v;
  }
  if (open && window.b > open_at) kept.push_back(Interval(open_at, window.b));
  return kept;
}

// ---------------------------------------------------------------------------
// cutoff extrapolation
// ---------------------------------------------------------------------------

namespace {

// Extrapolation of a delta-schedule value sequence: geometric-tail Richardson
// for finite limits, log-log regression for power-law divergence.
CutoffReport analyze_schedule(std::vector<std::pair<double, double>> sched, double quad_err) {
  CutoffReport rep;
  rep.schedule = std::move(sched);
  rep.quad_error = quad_err;
  const auto& s = rep.schedule;
  std::size_t n = s.size();
  if (n < 4) {
    rep.verdict = CutoffVerdict::inconclusive;
    return rep;
  }

  double v_last = s.back().second;
  double scale = 0;
  for (auto& [d, v] : s) scale = std::max(scale, std::abs(v));
  double noise = std::max(quad_err * 8.0, scale * 1e-13) + 1e-300;

  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = s[i + 1].second - s[i].second;
  std::size_t nd = d.size();
  auto absd = [&d](std::size_t i) { return std::abs(d[i]); };

  // converged tail: the last increments have sunk to noise level
  if (nd >= 2 && absd(nd - 1) <= noise && absd(nd - 2) <= 4.0 * noise) {
    rep.verdict = CutoffVerdict::finite_limit;
    rep.value = v_last;
    rep.error = std::max(quad_err, absd(nd - 1) + absd(nd - 2));
    return rep;
  }

  // geometric contraction of the above-noise tail differences -> Richardson
  std::vector<double> ratios;
  bool geometric = nd >= 4;
  std::size_t first = nd > 6 ? nd - 6 : 0;
  for (std::size_t i = first; geometric && i + 1 < nd; ++i) {
    if (absd(i) <= noise || absd(i + 1) <= noise) {
      geometric = false;
      break;
    }
    double r = d[i + 1] / d[i];
    if (!(r > -0.05 && r < 0.97)) {
      geometric = false;
      break;
    }
    ratios.push_back(r);
  }
  if (geometric && ratios.size() >= 3) {
    double rho = 0;
    for (double r : ratios) rho += r;
    rho /= static_cast<double>(ratios.size());
    double corr = rho > 0 ? d.back() * rho / (1.0 - rho) : 0.0;
    rep.verdict = CutoffVerdict::finite_limit;
    rep.value = v_last + corr;
    double spread = 0;
    for (double r : ratios) spread = std::max(spread, std::abs(r - rho));
    rep.error = std::max(quad_err, std::abs(corr) * (spread / std::max(1.0 - rho, 1e-3) + 1e-10) +
                                       std::abs(d.back()) * 1e-6);
    return rep;
  }

  // nearly-converged tail: increments shrinking into the noise band
  if (nd >= 3 && absd(nd - 1) <= 32.0 * noise && absd(nd - 1) <= absd(nd - 2) &&
      absd(nd - 2) <= absd(nd - 3)) {
    rep.verdict = CutoffVerdict::finite_limit;
    rep.value = v_last;
    rep.error = std::max(quad_err, 4.0 * absd(nd - 1) + absd(nd - 2));
    return rep;
  }

  // divergence: values increasing, log-log fit over the last 6 points
  std::size_t m = std::min<std::size_t>(6, n);
  bool increasing = true;
  for (std::size_t i = n - m + 1; i < n; ++i)
    if (!(s[i].second > s[i - 1].second) || !(s[i].second > 0)) increasing = false;
  if (increasing) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = n - m; i < n; ++i) {
      double lx = std::log(s[i].first);
      double ly = std::log(s[i].second);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      syy += ly * ly;
    }
    double mm = static_cast<double>(m);
    double slope = (mm * sxy - sx * sy) / (mm * sxx - sx * sx);
    double ss_tot = syy - sy * sy / mm;
    double ss_res = 0;
    double intercept = (sy - slope * sx) / mm;
    for (std::size_t i = n - m; i < n; ++i) {
      double pred = intercept + slope * std::log(s[i].first);
      double resid = std::log(s[i].second) - pred;
      ss_res += resid * resid;
    }
    double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
    if (r2 > 0.99 && slope < 0) {
      rep.verdict = CutoffVerdict::divergent;
      rep.rate_exponent = -slope;  // v(delta) ~ delta^{-rate}
      rep.fit_r2 = r2;
      return rep;
    }
  }

  rep.verdict = CutoffVerdict::inconclusive;
  return rep;
}

}  // namespace

CutoffReport cutoff_integral(const std::function<double(double)>& g, Interval window,
                             bool shrink_lower, CutoffSchedule sched, const QuadOptions& opt) {
  if (sched.scale <= 0) sched.scale = window.finite() ? std::min(1.0, 0.5 * window.length()) : 1.0;
  std::vector<std::pair<double, double>> values;
  double quad_err = 0;
  for (int k = sched.k_min; k <= sched.k_max; ++k) {
    double delta = sched.scale * std::pow(0.5, k);
    Interval w = shrink_lower ? Interval(window.a + delta, window.b)
                              : Interval(window.a, window.b - delta);
    if (w.length() <= 0) break;
    QuadratureResult q = integrate(g, w, opt);
    values.emplace_back(delta, q.value);
    quad_err = q.error_estimate;
  }
  return analyze_schedule(std::move(values), quad_err);
}

CutoffReport integrate_excluding(const std::function<double(double)>& g, const TestFunction& f,
                                 Interval window, Restriction restriction, CutoffSchedule sched,
                                 const QuadOptions& opt) {
  Interval win = window;
  if (!win.finite()) {
    // Both integrand factories vanish where f' == 0 and f is constant, so an
    // infinite window may be clipped to the derivative support.
    if (f.deriv_support()) {
      win = Interval(std::max(window.a, f.deriv_support()->a),
                     std::min(window.b, f.deriv_support()->b));
    } else if (restriction == Restriction::none) {
      QuadratureResult q = integrate_improper(g, window, opt, f.knots());
      CutoffReport rep;
      rep.verdict = q.status == QuadStatus::converged ? CutoffVerdict::finite_limit
                                                      : CutoffVerdict::inconclusive;
      rep.value = q.value;
      rep.error = rep.quad_error = q.error_estimate;
      rep.schedule.emplace_back(0.0, q.value);
      return rep;
    } else {
      throw Error(errc::bad_params,
                  "restricted cutoff integration needs a finite window or bounded f' support");
    }
  }

  if (restriction == Restriction::none) {
    QuadratureResult q = integrate(g, win, opt, f.knots());
    CutoffReport rep;
    rep.verdict = q.status == QuadStatus::converged ? CutoffVerdict::finite_limit
                                                    : CutoffVerdict::inconclusive;
    if (q.status == QuadStatus::divergent_suspected) rep.verdict = CutoffVerdict::divergent;
    rep.value = q.value;
    rep.error = rep.quad_error = q.error_estimate;
    rep.schedule.emplace_back(0.0, q.value);
    return rep;
  }

  if (sched.scale <= 0) {
    double amax = 0;
    const int n = 1024;
    for (int i = 0; i <= n; ++i) {
      double x = win.a + win.length() * i / n;
      if (i == 0) x += win.length() * 1e-12;
      if (i == n) x -= win.length() * 1e-12;
      amax = std::max(amax, std::abs(f.value(x)));
    }
    sched.scale = amax > 0 ? amax : 1.0;
  }

  std::vector<std::pair<double, double>> values;
  double quad_err = 0;
  std::vector<double> knots(f.knots().begin(), f.knots().end());
  for (int k = sched.k_min; k <= sched.k_max; ++k) {
    double delta = sched.scale * std::pow(0.5, k);
    auto kept = superlevel_intervals(f, win, delta, restriction);
    double sum = 0, err = 0;
    for (const auto& piece : kept) {
      QuadratureResult q = integrate(g, piece, opt, knots);
      sum += q.value;
      err += q.error_estimate;
    }
    values.emplace_back(delta, sum);
    quad_err = err;
  }
  return analyze_schedule(std::move(values), quad_err);
}

Antiderivative::Antiderivative(std::function<double(double)> fun, Interval domain, double x0,
                               double c0)
    : fun_(std::move(fun)) {
  if (!domain.contains(x0)) throw Error(errc::bad_params, "antiderivative anchor outside domain");
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;

  std::vector<double> pts{x0};
  double scale = std::max(std::abs(x0), 1.0);
  if (domain.lower_finite()) {
    for (int j = 1; j <= 48; ++j) pts.push_back(domain.a + (x0 - domain.a) * std::pow(0.5, j));
  } else {
    for (int j = 0; j <= 14; ++j) pts.push_back(x0 - scale * std::pow(2.0, j));
  }
  if (domain.upper_finite()) {
    for (int j = 1; j <= 48; ++j) pts.push_back(domain.b - (domain.b - x0) * std::pow(0.5, j));
  } else {
    for (int j = 0; j <= 14; ++j) pts.push_back(x0 + scale * std::pow(2.0, j));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  grid_ = std::move(pts);
  cum_.assign(grid_.size(), 0.0);
  std::size_t i0 = static_cast<std::size_t>(
      std::lower_bound(grid_.begin(), grid_.end(), x0) - grid_.begin());
  cum_[i0] = c0;
  for (std::size_t i = i0; i + 1 < grid_.size(); ++i)
    cum_[i + 1] = cum_[i] + integrate(fun_, Interval(grid_[i], grid_[i + 1]), opt).value;
  for (std::size_t i = i0; i > 0; --i)
    cum_[i - 1] = cum_[i] - integrate(fun_, Interval(grid_[i - 1], grid_[i]), opt).value;
}

double Antiderivative::operator()(double x) const {
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  if (x == grid_.front()) return cum_.front();
  if (x == grid_.back()) return cum_.back();
  if (x < grid_.front())
    return cum_.front() - integrate(fun_, Interval(x, grid_.front()), opt).value;
  if (x > grid_.back())
    return cum_.back() + integrate(fun_, Interval(grid_.back(), x), opt).value;
  std::size_t i = static_cast<std::size_t>(
      std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin() - 1);
  if (x == grid_[i]) return cum_[i];
  return cum_[i] + integrate(fun_, Interval(grid_[i], x), opt).value;
}

BoundaryEstimate boundary_limit(const std::function<double(double)>& expr, Interval window,
                                Endpoint endpoint, int K) {
  BoundaryEstimate est;
  est.endpoint = endpoint;
  est.heuristic = true;

  double x0;
  bool toward_infinity = false;
  if (endpoint == Endpoint::lower) {
    if (window.lower_finite()) {
      x0 = window.a;
    } else {
      toward_infinity = true;
      x0 = std::min(window.b - 1.0, -1.0);
    }
  } else {
    if (window.upper_finite()) {
      x0 = window.b;
    } else {
      toward_infinity = true;
      x0 = std::max(window.a + 1.0, 1.0);
    }
  }

  double dist0;
  if (!toward_infinity) {
    double other = endpoint == Endpoint::lower ? std::min(window.b, x0 + 1.0) : window.a;
    if (endpoint == Endpoint::upper) other = std::max(window.a, x0 - 1.0);
    dist0 = 0.25 * std::abs(x0 - other);
    if (!(dist0 > 0)) dist0 = 0.25;
  }

  for (int j = 0; j < K; ++j) {
    double x;
    if (toward_infinity) {
      double mag = std::abs(x0) * std::pow(2.0, j);
      x = endpoint == Endpoint::lower ? -mag : mag;
    } else {
      double d = dist0 * std::pow(0.5, j);
      x = endpoint == Endpoint::lower ? x0 + d : x0 - d;
    }
    double v;
    try {
      v = expr(x);
    } catch (const Error&) {
      est.eval_ok = false;
      break;
    }
    if (!std::isfinite(v)) {
      est.eval_ok = false;
      break;
    }
    est.samples.emplace_back(x, v);
  }
  if (est.samples.empty()) {
    est.eval_ok = false;
    est.tail_inf = est.tail_sup = std::nan("");
    return est;
  }
  std::size_t tail = (est.samples.size() + 2) / 3;
  est.tail_inf = kInf;
  est.tail_sup = -kInf;
  for (std::size_t i = est.samples.size() - tail; i < est.samples.size(); ++i) {
    est.tail_inf = std::min(est.tail_inf, est.samples[i].second);
    est.tail_sup = std::max(est.tail_sup, est.samples[i].second);
  }
  return est;
}

}  // namespace gnv

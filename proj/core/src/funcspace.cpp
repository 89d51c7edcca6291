#include "gnv/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace gnv {

TestFunction::TestFunction(Interval domain, std::function<Jet(double)> jet,
                           std::string family_tag, std::optional<Interval> deriv_support,
                           std::vector<double> knots)
    : domain_(domain),
      jet_(std::move(jet)),
      family_tag_(std::move(family_tag)),
      deriv_support_(deriv_support),
      knots_(std::move(knots)) {
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
}

Jet TestFunction::eval_jet(double x) const {
  if (!domain_.contains(x))
    throw Error(errc::out_of_domain, family_tag_ + " evaluated at x=" + std::to_string(x));
  return jet_(x);
}

// ---------------------------------------------------------------------------
// analytic families
// ---------------------------------------------------------------------------

TestFunction poly_bump(int k) {
  if (k < 2)
    throw Error(errc::bad_params,
                "poly_bump requires k >= 2 (zero extension must keep f'' integrable)");
  auto jet = [k](double x) -> Jet {
    if (std::abs(x) >= 1.0) return {0, 0, 0};
    double u = 1.0 - x * x;
    double f = std::pow(u, k);
    double fp = -2.0 * k * x * std::pow(u, k - 1);
    double fpp = -2.0 * k * std::pow(u, k - 1) + 4.0 * k * (k - 1) * x * x * std::pow(u, k - 2);
    return {f, fp, fpp};
  };
  return TestFunction(Interval::real_line(), jet, "poly_bump(" + std::to_string(k) + ")",
                      Interval(-1, 1), {-1.0, 0.0, 1.0});
}

TestFunction smooth_bump() {
  auto jet = [](double x) -> Jet {
    if (std::abs(x) >= 1.0) return {0, 0, 0};
    double u = 1.0 - x * x;
    double f = std::exp(1.0 - 1.0 / u);
    double w = -2.0 * x / (u * u);                       // (1 - 1/u)'
    double wp = -2.0 / (u * u) - 8.0 * x * x / (u * u * u);
    return {f, f * w, f * (w * w + wp)};
  };
  return TestFunction(Interval::real_line(), jet, "smooth_bump", Interval(-1, 1),
                      {-1.0, 0.0, 1.0});
}

Jet smooth_step_jet(double t) {
  if (t <= 0.0) return {0, 0, 0};
  if (t >= 1.0) return {1, 0, 0};
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  double ap = a / (t * t);
  double app = a * (1.0 / (t * t * t * t) - 2.0 / (t * t * t));
  double s = 1.0 - t;
  double bp = -b / (s * s);
  double bpp = b * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
  double D = a + b;
  double N = ap * b - a * bp;
  double Np = app * b - a * bpp;
  double Dp = ap + bp;
  double S = a / D;
  double Sp = N / (D * D);
  double Spp = (Np * D - 2.0 * N * Dp) / (D * D * D);
  return {S, Sp, Spp};
}

TestFunction sine_bump() {
  // phi(x) = S(2 - 2|x|): 1 on [-1/2,1/2], 0 outside (-1,1), smooth monotone between.
  auto jet = [](double x) -> Jet {
    double twopi = 2.0 * M_PI;
    double s = std::sin(twopi * x), c = std::cos(twopi * x);
    double ax = std::abs(x);
    if (ax >= 1.0) return {0, 0, 0};
    if (ax <= 0.5) return {s, twopi * c, -twopi * twopi * s};
    double sgn = x > 0 ? 1.0 : -1.0;
    Jet S = smooth_step_jet(2.0 - 2.0 * ax);
    double phi = S.f;
    double phip = S.fp * (-2.0 * sgn);
    double phipp = S.fpp * 4.0;
    double f = phi * s;
    double fp = phip * s + phi * twopi * c;
    double fpp = phipp * s + 2.0 * phip * twopi * c - phi * twopi * twopi * s;
    return {f, fp, fpp};
  };
  return TestFunction(Interval::real_line(), jet, "sine_bump", Interval(-1, 1),
                      {-1.0, -0.5, 0.0, 0.5, 1.0});
}

TestFunction power_profile(double m) {
  if (m < 1.0) throw Error(errc::bad_params, "power_profile requires m >= 1");
  auto jet = [m](double x) -> Jet {
    double u = x * (1.0 - x);
    double up = 1.0 - 2.0 * x;
    double f = std::pow(u, m);
    double fp = m * std::pow(u, m - 1) * up;
    double fpp = m * (m - 1) * std::pow(u, m - 2) * up * up - 2.0 * m * std::pow(u, m - 1);
    return {f, fp, fpp};
  };
  std::ostringstream tag;
  tag << "power_profile(" << m << ")";
  return TestFunction(Interval(0, 1), jet, tag.str(), std::nullopt, {0.5});
}

TestFunction affine_plus_parabola(double a0, double a1, double a2, Interval dom) {
  auto jet = [a0, a1, a2](double x) -> Jet {
    return {a0 + a1 * x + a2 * x * x, a1 + 2.0 * a2 * x, 2.0 * a2};
  };
  std::ostringstream tag;
  tag << "affine_plus_parabola(" << a0 << "," << a1 << "," << a2 << ")";
  return TestFunction(dom, jet, tag.str());
}

TestFunction constant_function(double c, Interval dom) {
  auto jet = [c](double) -> Jet { return {c, 0, 0}; };
  // f' == 0 everywhere, so any interval is a valid derivative support; a bounded
  // one lets infinite-window integrals clip exactly
  Interval supp(std::max(dom.a, -1.0), std::min(dom.b, 1.0));
  return TestFunction(dom, jet, "constant(" + std::to_string(c) + ")", supp, {});
}

TestFunction dilate(const TestFunction& f, double s) {
  if (s <= 0) throw Error(errc::bad_params, "dilate requires s > 0");
  Interval d = f.domain();
  Interval nd(d.lower_finite() ? d.a / s : -kInf, d.upper_finite() ? d.b / s : kInf);
  std::optional<Interval> supp;
  if (f.deriv_support()) supp = Interval(f.deriv_support()->a / s, f.deriv_support()->b / s);
  std::vector<double> knots;
  for (double k : f.knots()) knots.push_back(k / s);
  auto base = std::make_shared<TestFunction>(f);
  auto jet = [base, s](double x) -> Jet {
    Jet j = base->eval_jet(s * x);
    return {j.f, s * j.fp, s * s * j.fpp};
  };
  return TestFunction(nd, jet, f.family_tag() + "|dilated", supp, knots);
}

TestFunction scale(const TestFunction& f, double c) {
  auto base = std::make_shared<TestFunction>(f);
  auto jet = [base, c](double x) -> Jet {
    Jet j = base->eval_jet(x);
    return {c * j.f, c * j.fp, c * j.fpp};
  };
  return TestFunction(f.domain(), jet, f.family_tag() + "|scaled", f.deriv_support(),
                      f.knots());
}

// ---------------------------------------------------------------------------
// natural cubic spline
// ---------------------------------------------------------------------------

namespace {

struct SplineData {
  std::vector<double> x, y, m;  // m: second derivatives at knots
};

Jet spline_eval(const SplineData& sd, double t) {
  const auto& x = sd.x;
  const auto& y = sd.y;
  const auto& m = sd.m;
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  if (i >= x.size() - 1) i = x.size() - 2;
  double h = x[i + 1] - x[i];
  double A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
  double f = A * y[i] + B * y[i + 1] +
             ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
  double fp = (y[i + 1] - y[i]) / h - (3.0 * A * A - 1.0) * h / 6.0 * m[i] +
              (3.0 * B * B - 1.0) * h / 6.0 * m[i + 1];
  double fpp = A * m[i] + B * m[i + 1];
  return {f, fp, fpp};
}

}  // namespace

TestFunction spline_from_samples(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw Error(errc::bad_params, "spline needs >= 3 matching samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw Error(errc::bad_params, "spline sample abscissae must be strictly increasing");

  auto sd = std::make_shared<SplineData>();
  sd->x.assign(xs.begin(), xs.end());
  sd->y.assign(ys.begin(), ys.end());
  std::size_t n = xs.size();
  // tridiagonal solve for natural boundary conditions (m[0] = m[n-1] = 0)
  sd->m.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = sd->x[i] - sd->x[i - 1], h1 = sd->x[i + 1] - sd->x[i];
    double rhs = 6.0 * ((sd->y[i + 1] - sd->y[i]) / h1 - (sd->y[i] - sd->y[i - 1]) / h0);
    double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
    c[i] = h1 / diag;
    d[i] = (rhs - h0 * d[i - 1]) / diag;
  }
  for (std::size_t i = n - 2; i >= 1; --i) sd->m[i] = d[i] - c[i] * sd->m[i + 1];

  auto jet = [sd](double t) -> Jet { return spline_eval(*sd, t); };
  std::vector<double> knots(sd->x.begin(), sd->x.end());
  return TestFunction(Interval(sd->x.front(), sd->x.back()), jet, "spline", std::nullopt,
                      std::move(knots));
}

TestFunction spline_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::bad_params, "cannot open sample file " + path);
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  return spline_from_samples(xs, ys);
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

namespace {
double param(const std::map<std::string, double>& params, const std::string& key,
             std::optional<double> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (fallback) return *fallback;
  throw Error(errc::bad_params, "missing family parameter '" + key + "'");
}
}  // namespace

TestFunction build_family(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "poly_bump") return poly_bump(static_cast<int>(param(params, "k", 2)));
  if (name == "smooth_bump") return smooth_bump();
  if (name == "sine_bump") return sine_bump();
  if (name == "power_profile") return power_profile(param(params, "m", 2));
  if (name == "affine_plus_parabola") {
    Interval dom(param(params, "a", 0.0), param(params, "b", 1.0));
    return affine_plus_parabola(param(params, "a0", 1.0), param(params, "a1", 1.0),
                                param(params, "a2", -1.0), dom);
  }
  if (name == "constant") {
    Interval dom(param(params, "a", -kInf), param(params, "b", kInf));
    return constant_function(param(params, "c", 1.0), dom);
  }
  throw Error(errc::bad_params, "unknown function family '" + name + "'");
}

// ---------------------------------------------------------------------------
// zero location and classification
// ---------------------------------------------------------------------------

namespace {

double bisect_sign_change(const std::function<double(double)>& g, double lo, double hi,
                          double tol) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((glo < 0) != (gm < 0)) {
      hi = mid;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ZeroSet locate_zeros(const TestFunction& f, Interval window, double resolution) {
  Interval win = window;
  if (!win.finite()) {
    if (f.deriv_support())
      win = Interval(f.deriv_support()->a - 1.0, f.deriv_support()->b + 1.0);
    else
      throw Error(errc::bad_params, "locate_zeros needs a finite window");
  }
  if (resolution <= 0) resolution = win.length() / 4096.0;
  int n = std::max(8, static_cast<int>(std::ceil(win.length() / resolution)));
  double dx = win.length() / n;

  std::vector<double> xs(n + 1), vs(n + 1), ds(n + 1);
  double vmax = 0;
  for (int i = 0; i <= n; ++i) {
    // stay strictly inside the open window at the ends
    double x = win.a + dx * i;
    if (i == 0) x += dx * 1e-9;
    if (i == n) x -= dx * 1e-9;
    Jet j = f.eval_jet(x);
    xs[i] = x;
    vs[i] = j.f;
    ds[i] = j.fp;
    vmax = std::max(vmax, std::abs(vs[i]));
  }
  double flat_tol = vmax > 0 ? vmax * 1e-13 : 0.0;
  double zero_tol = vmax > 0 ? vmax * 1e-10 : 0.0;
  double bis_tol = 1e-12 * std::max(1.0, std::abs(win.a) + std::abs(win.b));
  auto value = [&f](double x) { return f.value(x); };
  auto deriv = [&f](double x) { return f.eval_jet(x).fp; };

  ZeroSet zs;
  zs.resolution = dx;
  int i = 0;
  while (i <= n) {
    if (std::abs(vs[i]) <= flat_tol) {
      int j = i;
      while (j + 1 <= n && std::abs(vs[j + 1]) <= flat_tol) ++j;
      if (j - i >= 2) {
        // level set of positive measure; refine its edges against the
        // non-flat neighbours and record them as touching zeroes (exact-zero
        // predicate pins support edges of zero-extended families; when the flat
        // values are merely tiny the bisection settles on the grid sample)
        auto in_zero_set = [&](double x) { return f.value(x) == 0.0 ? -1.0 : 1.0; };
        double lo = xs[i], hi = xs[j];
        if (i > 0) {
          lo = bisect_sign_change(in_zero_set, xs[i - 1], xs[i], bis_tol);
          Zero edge;
          edge.location = lo;
          edge.lo = edge.hi = lo;
          edge.kind = ZeroKind::double_zero;
          zs.zeros.push_back(edge);
        }
        if (j < n) {
          hi = bisect_sign_change(in_zero_set, xs[j], xs[j + 1], bis_tol);
          Zero edge;
          edge.location = hi;
          edge.lo = edge.hi = hi;
          edge.kind = ZeroKind::double_zero;
          zs.zeros.push_back(edge);
        }
        Zero z;
        z.kind = ZeroKind::flat_interval;
        z.lo = lo;
        z.hi = hi;
        z.location = 0.5 * (lo + hi);
        zs.zeros.push_back(z);
      } else {
        Zero z;
        z.location = xs[i];
        z.lo = z.hi = xs[i];
        double left = i > 0 ? vs[i - 1] : 0.0;
        double right = j + 1 <= n ? vs[j + 1] : 0.0;
        z.kind = (left * right < 0) ? ZeroKind::single : ZeroKind::double_zero;
        zs.zeros.push_back(z);
      }
      i = j + 1;
      continue;
    }
    if (i + 1 <= n && std::abs(vs[i + 1]) > flat_tol && (vs[i] < 0) != (vs[i + 1] < 0)) {
      double loc = bisect_sign_change(value, xs[i], xs[i + 1], bis_tol);
      Zero z;
      z.location = loc;
      z.lo = z.hi = loc;
      z.kind = ZeroKind::single;
      zs.zeros.push_back(z);
    }
    ++i;
  }
  // Touching (double) zeroes do not change the sign of f; find them as critical
  // points of f whose value vanishes after refinement.
  for (int k = 0; k + 1 <= n; ++k) {
    if (std::abs(vs[k]) <= flat_tol || std::abs(vs[k + 1]) <= flat_tol) continue;
    if ((vs[k] < 0) != (vs[k + 1] < 0)) continue;
    if (ds[k] == 0.0 || (ds[k] < 0) == (ds[k + 1] < 0)) continue;
    double loc = bisect_sign_change(deriv, xs[k], xs[k + 1], bis_tol);
    if (std::abs(f.value(loc)) > zero_tol) continue;
    Zero z;
    z.location = loc;
    z.lo = z.hi = loc;
    z.kind = ZeroKind::double_zero;
    zs.zeros.push_back(z);
  }
  std::sort(zs.zeros.begin(), zs.zeros.end(),
            [](const Zero& a, const Zero& b) { return a.location < b.location; });
  // merge zeroes closer than the bisection tolerance
  std::vector<Zero> merged;
  for (const auto& z : zs.zeros) {
    if (!merged.empty() && z.kind != ZeroKind::flat_interval &&
        merged.back().kind != ZeroKind::flat_interval &&
        std::abs(z.location - merged.back().location) <= 2 * bis_tol)
      continue;
    merged.push_back(z);
  }
  zs.zeros = std::move(merged);
  return zs;
}

FunctionFlags classify_function(const TestFunction& f, Interval window) {
  Interval win = window;
  if (!win.finite()) {
    if (f.deriv_support())
      win = Interval(f.deriv_support()->a - 1.0, f.deriv_support()->b + 1.0);
    else
      throw Error(errc::bad_params, "classify_function needs a finite window");
  }
  const int n = 4096;
  double dx = win.length() / n;
  double vmin = kInf, vmax = -kInf, amax = 0;
  auto visit = [&](double x) {
    double v = f.value(x);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    amax = std::max(amax, std::abs(v));
  };
  for (int i = 0; i <= n; ++i) {
    double x = win.a + dx * i;
    if (i == 0) x += dx * 1e-9;
    if (i == n) x -= dx * 1e-9;
    visit(x);
  }
  // geometric approach to the window endpoints: positivity must persist there
  for (int k = 1; k <= 40; ++k) {
    double d = win.length() * std::pow(0.5, k + 1);
    visit(win.a + d);
    visit(win.b - d);
  }

  FunctionFlags flags;
  double tiny = amax * 1e-15;
  flags.nonnegative = vmin >= -tiny;
  flags.strictly_positive = vmin > 1e-12 * std::max(amax, 1e-300);
  if (flags.nonnegative || vmax <= tiny) {
    flags.no_single_zeroes = true;  // sign-constant functions only touch zero
  } else {
    flags.no_single_zeroes = !locate_zeros(f, win).has_single();
  }
  return flags;
}

}  // namespace gnv

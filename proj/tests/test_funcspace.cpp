#include <doctest.h>

#include <cmath>
#include <random>

#include "gnv/funcspace.hpp"

using namespace gnv;

TEST_CASE("poly bump jets") {
  TestFunction f = poly_bump(2);
  Jet j = f.eval_jet(0.0);
  CHECK(j.f == doctest::Approx(1.0));
  CHECK(j.fp == doctest::Approx(0.0));
  CHECK(j.fpp == doctest::Approx(-4.0));

  Jet out = f.eval_jet(1.5);  // zero extension
  CHECK(out.f == 0.0);
  CHECK(out.fp == 0.0);
  CHECK(out.fpp == 0.0);

  CHECK(f.deriv_support());
  CHECK(f.deriv_support()->a == -1.0);
  CHECK(f.deriv_support()->b == 1.0);
  CHECK_THROWS_AS(poly_bump(1), Error);
}

TEST_CASE("sine bump reproduces the plateau profile") {
  TestFunction f = sine_bump();
  Jet j = f.eval_jet(0.25);
  CHECK(j.f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.fp == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(j.fpp == doctest::Approx(-4.0 * M_PI * M_PI).epsilon(1e-12));
  // plateau: phi == 1 on [-1/2, 1/2], zero outside (-1,1)
  CHECK(f.eval_jet(0.1).f == doctest::Approx(std::sin(0.2 * M_PI)).epsilon(1e-13));
  CHECK(f.eval_jet(1.2).f == 0.0);
  // smooth ramp strictly between the plateau and the support edge
  double mid = f.eval_jet(0.75).f;
  CHECK(std::abs(mid) < 1.0);
  CHECK(std::abs(mid) > 0.0);
}

TEST_CASE("smooth step endpoints") {
  CHECK(smooth_step_jet(-0.5).f == 0.0);
  CHECK(smooth_step_jet(1.5).f == 1.0);
  CHECK(smooth_step_jet(0.5).f == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(smooth_step_jet(0.3).fp > 0.0);
}

TEST_CASE("power profile construction and flags") {
  TestFunction f = power_profile(2);
  Jet j = f.eval_jet(0.5);
  CHECK(j.f == doctest::Approx(0.0625));
  FunctionFlags flags = classify_function(f, Interval(0, 1));
  CHECK(flags.nonnegative);
  CHECK_FALSE(flags.strictly_positive);  // f tends to 0 at the window ends
  CHECK(flags.no_single_zeroes);
}

TEST_CASE("classification of the built-in families") {
  FunctionFlags pb = classify_function(poly_bump(2), Interval(-2, 2));
  CHECK(pb.nonnegative);
  CHECK_FALSE(pb.strictly_positive);
  CHECK(pb.no_single_zeroes);

  FunctionFlags sb = classify_function(sine_bump(), Interval(-2, 2));
  CHECK_FALSE(sb.nonnegative);
  CHECK_FALSE(sb.strictly_positive);
  CHECK_FALSE(sb.no_single_zeroes);

  FunctionFlags ap = classify_function(affine_plus_parabola(1, 1, -1), Interval(0, 1));
  CHECK(ap.nonnegative);
  CHECK(ap.strictly_positive);
  CHECK(ap.no_single_zeroes);
}

TEST_CASE("zero location and classification") {
  ZeroSet zs = locate_zeros(poly_bump(2), Interval(-2, 2));
  REQUIRE(zs.zeros.size() >= 2);
  int doubles = 0;
  for (const auto& z : zs.zeros) {
    if (z.kind == ZeroKind::double_zero) {
      ++doubles;
      CHECK(std::abs(std::abs(z.location) - 1.0) < 1e-9);
    }
    CHECK(z.kind != ZeroKind::single);
  }
  CHECK(doubles == 2);

  ZeroSet sz = locate_zeros(sine_bump(), Interval(-0.4, 0.4));
  REQUIRE(sz.zeros.size() == 1);
  CHECK(sz.zeros[0].kind == ZeroKind::single);
  CHECK(std::abs(sz.zeros[0].location) < 1e-9);

  ZeroSet none = locate_zeros(affine_plus_parabola(1, 1, -1), Interval(0, 1));
  CHECK(none.zeros.empty());
}

TEST_CASE("flat interval zeroes") {
  // piecewise: a bump on [1,2] extended by zero; the window sees a flat zero set
  auto jet = [](double x) -> Jet {
    if (x <= 1.0 || x >= 2.0) return {0, 0, 0};
    double u = (x - 1.0) * (2.0 - x);
    return {u * u, 2 * u * (3.0 - 2.0 * x), 2 * (3.0 - 2.0 * x) * (3.0 - 2.0 * x) - 4 * u};
  };
  TestFunction f(Interval::real_line(), jet, "shifted_bump", Interval(1, 2), {1.0, 2.0});
  ZeroSet zs = locate_zeros(f, Interval(-2, 3));
  bool has_flat = false;
  for (const auto& z : zs.zeros)
    if (z.kind == ZeroKind::flat_interval && z.hi - z.lo > 1.0) has_flat = true;
  CHECK(has_flat);
}

TEST_CASE("jet consistency by central differences") {
  std::mt19937_64 rng(42);
  auto families = {poly_bump(2), poly_bump(3), smooth_bump(), sine_bump(), power_profile(2),
                   affine_plus_parabola(1, 1, -1)};
  for (const auto& f : families) {
    Interval win = f.domain().finite() ? f.domain() : Interval(-1, 1);
    double scale = win.length();
    double h1 = 1e-4 * scale;
    double h2 = 5e-4 * scale;
    // family-wide derivative scales, for a floor where the jets nearly vanish
    double max_fp = 0, max_fpp = 0;
    for (int i = 1; i < 512; ++i) {
      Jet j = f.eval_jet(win.a + win.length() * i / 512.0);
      max_fp = std::max(max_fp, std::abs(j.fp));
      max_fpp = std::max(max_fpp, std::abs(j.fpp));
    }
    std::uniform_real_distribution<double> uni(win.a + 4 * h2, win.b - 4 * h2);
    int tested = 0;
    for (int i = 0; i < 1000 && tested < 200; ++i) {
      double x = uni(rng);
      bool near_knot = false;
      for (double k : f.knots())
        if (std::abs(x - k) < 4 * h2) near_knot = true;
      if (near_knot) continue;
      ++tested;
      Jet j = f.eval_jet(x);
      // 4th-order 5-point stencils, Richardson-combined for f''
      auto d1_at = [&](double h) {
        return (f.value(x - 2 * h) - 8 * f.value(x - h) + 8 * f.value(x + h) -
                f.value(x + 2 * h)) /
               (12 * h);
      };
      auto d2_at = [&](double h) {
        return (-f.value(x + 2 * h) + 16 * f.value(x + h) - 30 * j.f + 16 * f.value(x - h) -
                f.value(x - 2 * h)) /
               (12 * h * h);
      };
      double d1 = d1_at(h1);
      double d2 = (16.0 * d2_at(0.5 * h2) - d2_at(h2)) / 15.0;
      double s1 = std::max(std::abs(j.fp), 1e-2 * std::max(max_fp, 1e-8));
      double s2 = std::max(std::abs(j.fpp), 1e-2 * std::max(max_fpp, 1e-8));
      CHECK(std::abs(d1 - j.fp) / s1 < 1e-6);
      CHECK(std::abs(d2 - j.fpp) / s2 < 1e-6);
    }
    CHECK(tested == 200);
  }
}

TEST_CASE("derivative support honesty") {
  for (const auto& f : {poly_bump(2), smooth_bump(), sine_bump()}) {
    REQUIRE(f.deriv_support());
    const Interval s = *f.deriv_support();
    double worst = 0;
    for (int i = 0; i <= 10000; ++i) {
      double x = -3.0 + 6.0 * i / 10000.0;
      if (x > s.a && x < s.b) continue;
      worst = std::max(worst, std::abs(f.eval_jet(x).fp));
    }
    CHECK(worst == 0.0);
  }
}

TEST_CASE("spline interpolation of a smooth function") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 40; ++i) {
    double x = -1.0 + 2.0 * i / 40.0;
    xs.push_back(x);
    ys.push_back(std::sin(2.0 * x));
  }
  TestFunction sp = spline_from_samples(xs, ys);
  CHECK(sp.family_tag() == "spline");
  CHECK(sp.knots().size() == 41);
  for (double x : {-0.77, -0.2, 0.33, 0.61}) {
    CHECK(sp.value(x) == doctest::Approx(std::sin(2 * x)).epsilon(1e-5));
    CHECK(sp.eval_jet(x).fp == doctest::Approx(2 * std::cos(2 * x)).epsilon(1e-3));
  }
  CHECK_THROWS_AS(sp.eval_jet(1.5), Error);

  std::vector<double> bad_x{0.0, 0.0, 1.0};
  std::vector<double> bad_y{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(spline_from_samples(bad_x, bad_y), Error);
}

TEST_CASE("family registry and transforms of functions") {
  TestFunction f = build_family("poly_bump", {{"k", 2}});
  CHECK(f.family_tag() == "poly_bump(2)");
  CHECK_THROWS_AS(build_family("nope"), Error);

  TestFunction d = dilate(f, 2.0);  // f(2x): support shrinks to [-1/2, 1/2]
  CHECK(d.value(0.25) == doctest::Approx(f.value(0.5)));
  CHECK(d.eval_jet(0.25).fp == doctest::Approx(2.0 * f.eval_jet(0.5).fp));
  CHECK(d.deriv_support()->b == doctest::Approx(0.5));

  TestFunction s = scale(f, 3.0);
  CHECK(s.value(0.5) == doctest::Approx(3.0 * f.value(0.5)));
}

TEST_CASE("out of domain evaluation") {
  TestFunction f = power_profile(2);
  CHECK_THROWS_AS(f.eval_jet(-0.1), Error);
  CHECK_THROWS_AS(f.eval_jet(1.0), Error);  // open interval
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "gnv/weights.hpp"

using namespace gnv;

namespace {
std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return g;
}
}  // namespace

TEST_CASE("registry primitives match the worked examples") {
  // h == 1, zero anchored: H = lambda, T = lambda
  TransformedWeight unit = make_primitive(unit_weight(), Anchor::zero_anchored());
  CHECK(unit.H(2.5) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(unit.T(3.0) == doctest::Approx(3.0).epsilon(1e-10));

  // power: H = lambda^{1-theta p}/(1-theta p), T = lambda/(1-theta p)
  TransformedWeight pw = make_primitive(power_weight(0.5, 4.0), Anchor::closed_form());
  CHECK(pw.h(2.0) == doctest::Approx(0.25));         // lambda^{-2}
  CHECK(pw.H(2.0) == doctest::Approx(-0.5));         // lambda^{-1}/(-1)
  CHECK(pw.T(2.0) == doctest::Approx(-2.0));         // lambda/(1-2)
  CHECK_THROWS_AS(power_weight(0.5, 2.0), Error);    // theta p = 1

  // log: H = ln, T = lambda ln lambda
  TransformedWeight lg = make_primitive(log_reciprocal_weight(), Anchor::closed_form());
  CHECK(lg.H(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(lg.T(2.0) == doctest::Approx(2.0 * std::log(2.0)));

  // exponential: H = e^{alpha lambda^beta}/(alpha beta), T = lambda^{1-beta}/(alpha beta)
  TransformedWeight ex = make_primitive(exponential_weight(2.0, 3.0), Anchor::closed_form());
  double lam = 1.3;
  CHECK(ex.T(lam) == doctest::Approx(std::pow(lam, -2.0) / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(exponential_weight(0.0, 1.0), Error);
  CHECK_THROWS_AS(exponential_weight(1.0, 0.5), Error);

  CHECK_THROWS_AS(registry("nope"), Error);
}

TEST_CASE("transform identity T*h = H on a log grid") {
  std::vector<std::pair<TransformedWeight, double>> tws;  // weight, grid top
  tws.emplace_back(make_primitive(unit_weight(), Anchor::closed_form()), 1e3);
  tws.emplace_back(make_primitive(power_weight(0.1, 3.0), Anchor::closed_form()), 1e3);
  tws.emplace_back(make_primitive(power_weight(-0.5, 2.0), Anchor::closed_form()), 1e3);
  tws.emplace_back(make_primitive(log_reciprocal_weight(), Anchor::closed_form()), 1e3);
  // keep e^{alpha lambda^beta} inside double range
  tws.emplace_back(make_primitive(exponential_weight(1.0, 1.0), Anchor::closed_form()), 500.0);
  tws.emplace_back(make_primitive(exponential_weight(-2.0, 2.0), Anchor::closed_form()), 15.0);
  for (const auto& [tw, hi] : tws) {
    for (double lam : log_grid(1e-4, hi, 1000)) {
      double hv = tw.h(lam);
      if (hv == 0.0) continue;
      double lhs = tw.T(lam) * hv;
      double H = tw.H(lam);
      CHECK(std::abs(lhs - H) <= 1e-12 * std::max(1.0, std::abs(H)));
    }
  }
}

TEST_CASE("numeric primitive differs from the closed form by a constant") {
  auto w = std::make_shared<Weight>(log_reciprocal_weight());
  TransformedWeight closed = make_primitive(w, Anchor::closed_form());
  TransformedWeight numeric = make_primitive(w, Anchor::point_anchored(1.0, 5.0));
  double lo = kInf, hi = -kInf;
  for (double lam : log_grid(1e-3, 1e2, 60)) {
    double d = numeric.H(lam) - closed.H(lam);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  CHECK(hi - lo < 1e-8);
  CHECK(lo == doctest::Approx(5.0).epsilon(1e-8));  // ln(1) = 0

  // transform identity at the numeric-primitive tolerance
  for (double lam : log_grid(1e-3, 1e2, 200)) {
    double rel = std::abs(numeric.T(lam) * numeric.h(lam) - numeric.H(lam)) /
                 std::max(1.0, std::abs(numeric.H(lam)));
    CHECK(rel < 1e-8);
  }
}

TEST_CASE("anchor covariance: shifting H shifts T by c/h") {
  auto w = std::make_shared<Weight>(power_weight(0.25, 2.0));
  TransformedWeight base = make_primitive(w, Anchor::closed_form());
  double c = 0.7;
  double base_at_1 = base.H(1.0);
  TransformedWeight shifted = make_primitive(w, Anchor::point_anchored(1.0, base_at_1 + c));
  for (double lam : log_grid(0.01, 10.0, 40)) {
    double expect = base.T(lam) + c / base.h(lam);
    CHECK(shifted.T(lam) == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("finite differences of closed primitives reproduce h") {
  std::mt19937_64 rng(42);
  std::vector<std::pair<TransformedWeight, double>> tws;  // weight, lambda range top
  tws.emplace_back(make_primitive(power_weight(0.3, 3.0), Anchor::closed_form()), 20.0);
  tws.emplace_back(make_primitive(log_reciprocal_weight(), Anchor::closed_form()), 20.0);
  tws.emplace_back(make_primitive(exponential_weight(1.0, 2.0), Anchor::closed_form()), 3.0);
  for (const auto& [tw, top] : tws) {
    std::uniform_real_distribution<double> uni(0.05, top);
    for (int i = 0; i < 200; ++i) {
      double lam = uni(rng);
      double h = 1e-4 * std::max(1.0, lam);
      // 4th-order stencil keeps the truncation term tiny for the stiff weights
      double fd = (tw.H(lam - 2 * h) - 8 * tw.H(lam - h) + 8 * tw.H(lam + h) -
                   tw.H(lam + 2 * h)) /
                  (12 * h);
      CHECK(std::abs(fd - tw.h(lam)) / std::max(1.0, std::abs(tw.h(lam))) < 1e-8);
    }
  }
}

TEST_CASE("zero anchored primitive requires integrability") {
  CHECK_THROWS_AS(make_primitive(power_weight(0.75, 2.0), Anchor::zero_anchored()), Error);
  // integrable power weight: H(x) = x^{0.5}/0.5
  TransformedWeight tw = make_primitive(power_weight(0.25, 2.0), Anchor::zero_anchored());
  CHECK(tw.H(0.49) == doctest::Approx(2.0 * std::sqrt(0.49)).epsilon(1e-7));
  CHECK(tw.H_tilde_zero());
  CHECK(*tw.H_tilde_zero() == 0.0);
}

TEST_CASE("extension of H at zero") {
  TransformedWeight p_small = make_primitive(power_weight(0.25, 2.0), Anchor::closed_form());
  CHECK(p_small.extension_kind() == ExtensionKind::continuous_limit);
  CHECK(*p_small.H_tilde_zero() == doctest::Approx(0.0).epsilon(1e-9));

  TransformedWeight p_big = make_primitive(power_weight(0.75, 2.0), Anchor::closed_form());
  CHECK(p_big.extension_kind() == ExtensionKind::convention_zero);
  CHECK(*p_big.H_tilde_zero() == 0.0);

  TransformedWeight lg = make_primitive(log_reciprocal_weight(), Anchor::closed_form());
  CHECK(lg.extension_kind() == ExtensionKind::convention_zero);

  TransformedWeight ex = make_primitive(exponential_weight(2.0, 1.0), Anchor::closed_form());
  CHECK(ex.extension_kind() == ExtensionKind::continuous_limit);
  CHECK(*ex.H_tilde_zero() == doctest::Approx(0.5).epsilon(1e-7));  // 1/(alpha beta)

  TransformedWeight sh = exponential_shifted_primitive(2.0, 1.0);
  CHECK(*sh.H_tilde_zero() == 0.0);
}

TEST_CASE("near-zero classification") {
  // power theta > 1/2: h and |T|^{p/2} h both nonincreasing
  WeightClass big = classify_weight(
      make_primitive(power_weight(0.75, 2.0), Anchor::closed_form()), 2.0);
  CHECK(big.nonincreasing_near_zero);
  CHECK_FALSE(big.bounded_near_zero);
  CHECK_FALSE(big.integrable_near_zero);
  CHECK(big.T_half_p_h_nonincreasing_near_zero);
  CHECK(big.monotone_regime_ok());

  // log weight at p = 2: |T| h = |ln| nonincreasing near zero
  WeightClass lg = classify_weight(
      make_primitive(log_reciprocal_weight(), Anchor::closed_form()), 2.0);
  CHECK(lg.nonincreasing_near_zero);
  CHECK_FALSE(lg.integrable_near_zero);
  CHECK(lg.T_half_p_h_nonincreasing_near_zero);

  // log weight at p = 4: |T|^2 h = lambda |ln|^2 locally bounded, G nonincreasing
  WeightClass lg4 = classify_weight(
      make_primitive(log_reciprocal_weight(), Anchor::closed_form()), 4.0);
  CHECK(lg4.T_half_p_h_bounded_near_zero);
  CHECK(lg4.G_bounded_or_nonincreasing_near_zero);
  CHECK(lg4.rg_regime_ok());

  // unit weight: everything bounded
  WeightClass u = classify_weight(make_primitive(unit_weight(), Anchor::closed_form()), 3.0);
  CHECK(u.bounded_near_zero);
  CHECK(u.integrable_near_zero);
  CHECK(u.T_half_p_h_bounded_near_zero);

  // exponential alpha > 0: h bounded near zero but increasing in lambda
  WeightClass ex = classify_weight(
      make_primitive(exponential_weight(1.0, 1.0), Anchor::closed_form()), 2.0);
  CHECK(ex.bounded_near_zero);
  CHECK(ex.integrable_near_zero);
}

TEST_CASE("G_h of the power weight") {
  double theta = 0.3, p = 4.0;
  TransformedWeight tw = make_primitive(power_weight(theta, p), Anchor::closed_form());
  for (double lam : log_grid(1e-3, 10.0, 50)) {
    double expect = std::pow(std::abs(1.0 - theta * p), -0.5 * p) * std::pow(lam, -theta * p);
    CHECK(tw.G(lam, p) == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("tabulated weights") {
  std::vector<double> xs, hs;
  for (int i = 0; i <= 50; ++i) {
    double x = 0.1 + i * 0.1;
    xs.push_back(x);
    hs.push_back(1.0 + std::sin(x) * std::sin(x));
  }
  Weight w = weight_from_samples(xs, hs);
  CHECK(w.h(1.0) == doctest::Approx(1.0 + std::sin(1.0) * std::sin(1.0)).epsilon(1e-4));
  TransformedWeight tw = make_primitive(w, Anchor::point_anchored(1.0, 0.0));
  for (double lam : {0.5, 1.7, 3.3}) {
    double fd = (tw.H(lam + 1e-5) - tw.H(lam - 1e-5)) / 2e-5;
    CHECK(fd == doctest::Approx(w.h(lam)).epsilon(1e-6));
  }

  std::vector<double> bad_h{-1.0, 0.0, 1.0};
  std::vector<double> bad_x{0.0, 1.0, 2.0};
  CHECK_THROWS_AS(weight_from_samples(bad_x, bad_h), Error);
}

TEST_CASE("transform value convention at zeroes of h") {
  // a continuous weight vanishing at 1: T must be 0 there by convention
  auto h = [](double lam) { return (lam - 1.0) * (lam - 1.0); };
  Weight w(Interval(0, kInf), h, "touching", std::nullopt, {}, true);
  TransformedWeight tw = make_primitive(std::make_shared<Weight>(w),
                                        Anchor::point_anchored(2.0, 0.0));
  CHECK(transform_value(tw, 1.0) == 0.0);
  CHECK(transform_value(tw, 3.0) != 0.0);  // H(3) = int_2^3 h > 0
}

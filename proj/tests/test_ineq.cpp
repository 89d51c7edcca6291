#include <doctest.h>

#include <cmath>

#include "gnv/ineq.hpp"
#include "oracle.hpp"

using namespace gnv;

namespace {
TransformedWeight unit_tw() { return make_primitive(unit_weight(), Anchor::closed_form()); }
}  // namespace

TEST_CASE("boundary theta: two-point evaluation and telescoping") {
  TestFunction f = affine_plus_parabola(1, 1, -1);  // 1 + x - x^2
  TransformedWeight tw = unit_tw();

  // f'(1/4) = 1/2, f'(3/4) = -1/2, f(1/4) = f(3/4) = 19/16
  double theta = boundary_theta(f, tw, 2.0, 0.25, 0.75);
  CHECK(theta == doctest::Approx(-19.0 / 16.0).epsilon(1e-14));

  double t1 = boundary_theta(f, tw, 2.0, 0.25, 0.5);
  double t2 = boundary_theta(f, tw, 2.0, 0.5, 0.75);
  CHECK(t1 + t2 == doctest::Approx(theta).epsilon(1e-13));

  // vanishing f' at both ends kills the defect
  TestFunction g = poly_bump(2);
  CHECK(boundary_theta(g, tw, 3.0, -1.5, 1.5) == 0.0);
}

TEST_CASE("windowed orientation fixture") {
  // Frozen by the independent oracle: on [1/4, 3/4] for f = 1 + x - x^2, p = 2,
  // h == 1: lhs = 1/24, rhs = 59/48, theta = -19/16, and equality holds exactly
  // in the orientation lhs <= C rhs + theta.
  TestFunction f = affine_plus_parabola(1, 1, -1);
  InequalitySpec spec = make_spec(unit_tw(), 2.0, Interval(0, 1), Regime::r3_general);
  Verdict v = verify_windowed(f, spec, 0.25, 0.75);

  CHECK(v.lhs.finite());
  CHECK(v.lhs.value == doctest::Approx(1.0 / 24.0).epsilon(1e-9));
  CHECK(v.rhs.value == doctest::Approx(59.0 / 48.0).epsilon(1e-9));
  REQUIRE(v.defect);
  CHECK(*v.defect == doctest::Approx(-19.0 / 16.0).epsilon(1e-12));
  CHECK(v.constant == doctest::Approx(1.0));
  CHECK(v.slack == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(v.pass == Pass::holds);

  // independent oracle recomputation of both sides
  double lhs_or = oracle::integrate([&f](double x) {
    Jet j = f.eval_jet(x);
    return j.fp * j.fp;
  }, 0.25, 0.75);
  double rhs_or = oracle::integrate([&f](double x) {
    Jet j = f.eval_jet(x);
    return std::abs(j.fpp * j.f);
  }, 0.25, 0.75);
  CHECK(v.lhs.value == doctest::Approx(lhs_or).epsilon(1e-10));
  CHECK(v.rhs.value == doctest::Approx(rhs_or).epsilon(1e-10));
}

TEST_CASE("model inequality on the poly bump") {
  TestFunction f = poly_bump(2);
  InequalitySpec spec = make_spec(unit_tw(), 2.0, Interval::real_line(), Regime::r3_real_line);
  Verdict v = verify(f, spec);

  double rhs_truth = 2944.0 * std::sqrt(3.0) / 945.0 - 256.0 / 105.0;
  CHECK(v.lhs.value == doctest::Approx(256.0 / 105.0).epsilon(1e-10));
  CHECK(v.rhs.value == doctest::Approx(rhs_truth).epsilon(1e-9));
  CHECK(v.constant == doctest::Approx(1.0));
  CHECK(v.pass == Pass::holds);
  CHECK(v.admissibility.member == Member::yes);
  CHECK(v.admissibility.sufficient_condition_used == SufficientCondition::deriv_support_bounded);
}

TEST_CASE("windowed consistency with the defect-free verdict") {
  TestFunction f = poly_bump(2);
  InequalitySpec spec = make_spec(unit_tw(), 2.0, Interval(-2, 2), Regime::r3_general);
  Verdict windowed = verify_windowed(f, spec, -1.5, 1.5);
  REQUIRE(windowed.defect);
  CHECK(*windowed.defect == 0.0);

  InequalitySpec full = make_spec(unit_tw(), 2.0, Interval::real_line(), Regime::r3_real_line);
  Verdict free = verify(f, full);
  CHECK(windowed.lhs.value == doctest::Approx(free.lhs.value).epsilon(1e-10));
  CHECK(windowed.rhs.value == doctest::Approx(free.rhs.value).epsilon(1e-10));
  CHECK(windowed.pass == Pass::holds);
}

TEST_CASE("constant function verdicts") {
  TestFunction f = constant_function(2.0);
  InequalitySpec spec = make_spec(unit_tw(), 3.0, Interval::real_line(), Regime::r3_real_line);
  Verdict v = verify(f, spec);
  CHECK(v.lhs.value == doctest::Approx(0.0));
  CHECK(v.rhs.value == doctest::Approx(0.0));
  CHECK(v.pass == Pass::holds);
}

TEST_CASE("lhs and rhs integrals for the sine bump with a power weight") {
  TestFunction f = sine_bump();
  double p = 4.0, theta = 0.3;
  TransformedWeight tw = make_primitive(power_weight(theta, p), Anchor::closed_form());
  InequalitySpec spec = make_spec(tw, p, Interval::real_line(), Regime::r5_h_integrable);

  CutoffReport lhs = lhs_integral(f, spec);
  REQUIRE(lhs.divergent());
  CHECK(lhs.rate_exponent == doctest::Approx(theta * p - 1.0).epsilon(0.1));

  CutoffReport rhs = rhs_integral(f, spec);
  CHECK(rhs.finite());
}

TEST_CASE("admissibility reports") {
  TestFunction pb = poly_bump(2);
  InequalitySpec r3 = make_spec(unit_tw(), 2.0, Interval::real_line(), Regime::r3_real_line);
  AdmissibilityReport a = check_admissible(pb, r3);
  CHECK(a.member == Member::yes);
  CHECK(a.structural_ok);

  TestFunction sb = sine_bump();
  double p = 4.0;
  TransformedWeight tw = make_primitive(power_weight(0.3, p), Anchor::closed_form());
  InequalitySpec dz = make_spec(tw, p, Interval::real_line(), Regime::r5_double_zeroes);
  AdmissibilityReport b = check_admissible(sb, dz);
  CHECK(b.member == Member::no);  // single zero at 0

  InequalitySpec rg = make_spec(tw, p, Interval::real_line(), Regime::r5_rg);
  AdmissibilityReport c = check_admissible(sb, rg);
  CHECK(c.member == Member::no);  // the eps-local G-integral diverges
  REQUIRE(c.rg_local_report);
  CHECK_FALSE(c.rg_local_report->finite());
}

TEST_CASE("power specialization constants and verdicts") {
  // Mazya case theta = 1/2, p = 4: constant ((p-1)/|1-theta p|)^{p/2} = 9
  TestFunction f = power_profile(2);
  Verdict v = specialize_power(f, 0.5, 4.0, PowerVariant::case2);
  CHECK(v.constant == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(v.pass == Pass::holds);

  // theta = 0 reduces to the classical constant (sqrt(p-1))^p
  Verdict v0 = specialize_power(poly_bump(2), 0.0, 3.0, PowerVariant::case1);
  CHECK(v0.constant == doctest::Approx(std::pow(std::sqrt(2.0), 3.0)).epsilon(1e-14));
  CHECK(v0.pass == Pass::holds);

  // theta = -1: weight lambda^p, constant ((p-1)/(1+p))^{p/2}
  double p = 2.0;
  Verdict vneg = specialize_power(poly_bump(2), -1.0, p, PowerVariant::case1);
  CHECK(vneg.constant == doctest::Approx(std::pow((p - 1.0) / (1.0 + p), p / 2)).epsilon(1e-14));
  CHECK(vneg.pass == Pass::holds);

  CHECK_THROWS_AS(specialize_power(f, 0.5, 4.0, PowerVariant::case1), Error);  // theta > 1/p
  CHECK_THROWS_AS(specialize_power(sine_bump(), 0.5, 4.0, PowerVariant::case2), Error);
  CHECK_THROWS_AS(specialize_power(f, 0.25, 4.0, PowerVariant::case1), Error);  // theta p = 1
}

TEST_CASE("power specialization matches the generic machinery") {
  // folding |1 - theta p|^{p/2} into the constant must reproduce the generic verdict
  TestFunction f = power_profile(2);
  double theta = 0.5, p = 4.0;
  Verdict spec61 = specialize_power(f, theta, p, PowerVariant::case2);

  TransformedWeight tw = make_primitive(power_weight(theta, p), Anchor::closed_form());
  InequalitySpec spec = make_spec(tw, p, Interval(0, 1), Regime::r5_double_zeroes);
  Verdict generic = verify(f, spec);

  double lhs_g = generic.lhs.value;
  double rhs_g = generic.rhs.value * generic.constant;  // (sqrt(p-1))^p int |f'' T|^{p/2} h
  double rhs_s = spec61.rhs.value * spec61.constant;
  CHECK(lhs_g == doctest::Approx(spec61.lhs.value).epsilon(1e-8));
  CHECK(rhs_g == doctest::Approx(rhs_s).epsilon(1e-8));
}

TEST_CASE("sup variant") {
  TestFunction f = power_profile(2);
  SupVerdict sv = sup_variant(f, 0.5);
  CHECK(sv.constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_FALSE(sv.lhs_divergent);
  CHECK(sv.pass == Pass::holds);

  SupVerdict cf = sup_variant(constant_function(3.0, Interval(0, 1)), 0.5);
  CHECK(cf.lhs_sup == 0.0);
  CHECK(cf.pass == Pass::holds);

  SupVerdict div = sup_variant(sine_bump(), 0.3);
  CHECK(div.lhs_divergent);

  CHECK_THROWS_AS(sup_variant(f, 0.0), Error);
}

TEST_CASE("log variant") {
  TestFunction f = power_profile(2);
  Verdict v = log_variant(f, 2.0);
  CHECK(v.constant == doctest::Approx(1.0));
  CHECK(v.pass == Pass::holds);

  // oracle for the lhs: int f'^2 / f over (0,1); cutoff extrapolation carries
  // a ~1e-5 residual which the report's own error field must cover
  double lhs_or = oracle::integrate([&f](double x) {
    Jet j = f.eval_jet(x);
    return j.fp * j.fp / j.f;
  }, 1e-9, 1.0 - 1e-9);
  CHECK(std::abs(v.lhs.value - lhs_or) <= std::max(3.0 * v.lhs.error, 1e-4 * lhs_or));

  Verdict v4 = log_variant(poly_bump(2), 4.0);
  CHECK(v4.pass == Pass::holds);
}

TEST_CASE("exp variant") {
  TestFunction f = poly_bump(2);
  double p = 3.0;
  Verdict v2 = exp_variant(f, p, 1.0, 1.0, 2);
  CHECK(v2.constant == doctest::Approx(std::pow(std::sqrt((p - 1.0) / 1.0), p)).epsilon(1e-14));
  CHECK(v2.pass == Pass::holds);

  Verdict v1 = exp_variant(f, 2.0, 1.0, 2.0, 1);
  CHECK(v1.pass == Pass::holds);

  CHECK_THROWS_AS(exp_variant(f, 2.0, 0.0, 1.0, 1), Error);
  CHECK_THROWS_AS(exp_variant(f, 2.0, 1.0, 0.5, 1), Error);

  // constant f: 0 <= 0
  Verdict vc = exp_variant(constant_function(1.0), 2.0, 1.0, 1.0, 2);
  CHECK(vc.lhs.value == doctest::Approx(0.0));
  CHECK(vc.pass == Pass::holds);
}

TEST_CASE("dilation invariance for the unweighted inequality") {
  TestFunction f = poly_bump(2);
  InequalitySpec spec = make_spec(unit_tw(), 3.0, Interval::real_line(), Regime::r3_real_line);
  double base_ratio = 0;
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    TestFunction fs = dilate(f, s);
    CutoffReport lhs = lhs_integral(fs, spec);
    CutoffReport rhs = rhs_integral(fs, spec);
    REQUIRE(lhs.finite());
    REQUIRE(rhs.finite());
    double ratio = lhs.value / rhs.value;
    if (base_ratio == 0)
      base_ratio = ratio;
    else
      CHECK(ratio == doctest::Approx(base_ratio).epsilon(1e-8));
    // both sides scale as s^{p-1}
    if (s == 2.0) {
      CutoffReport l1 = lhs_integral(f, spec);
      CHECK(lhs.value == doctest::Approx(l1.value * std::pow(s, spec.p - 1.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("scale invariance for power weights") {
  TestFunction f = power_profile(2);
  double theta = 0.1, p = 3.0;
  TransformedWeight tw = make_primitive(power_weight(theta, p), Anchor::closed_form());
  InequalitySpec spec = make_spec(tw, p, Interval(0, 1), Regime::r5_h_integrable);
  double base_ratio = 0, base_lhs = 0;
  for (double c : {0.5, 1.0, 3.0}) {
    TestFunction fc = scale(f, c);
    CutoffReport lhs = lhs_integral(fc, spec);
    CutoffReport rhs = rhs_integral(fc, spec);
    REQUIRE(lhs.finite());
    REQUIRE(rhs.finite());
    double ratio = lhs.value / rhs.value;
    if (base_ratio == 0) {
      base_ratio = ratio;
      base_lhs = lhs.value / std::pow(c, p * (1.0 - theta));
    } else {
      CHECK(ratio == doctest::Approx(base_ratio).epsilon(1e-8));
      CHECK(lhs.value / std::pow(c, p * (1.0 - theta)) ==
            doctest::Approx(base_lhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("counterexample cases") {
  CounterexampleCase divergent = counterexample_case(4.0, 0.3);
  CHECK(divergent.expected_divergent);
  CHECK(divergent.lhs.divergent());
  CHECK(divergent.lhs.rate_exponent == doctest::Approx(0.2).epsilon(0.1));
  CHECK(divergent.rhs.finite());
  CHECK(divergent.lower_bound_ok);
  CHECK(divergent.ok);

  CounterexampleCase finite = counterexample_case(4.0, 0.1);
  CHECK_FALSE(finite.expected_divergent);
  CHECK(finite.lhs.finite());
  CHECK(finite.rhs.finite());
  CHECK(finite.holds_verdict.pass == Pass::holds);
  CHECK(finite.ok);
}

TEST_CASE("verdict assembles inconclusive outside the admissible class") {
  // divergent lhs with finite rhs and failed admissibility must not read "violated"
  TestFunction f = sine_bump();
  double p = 4.0;
  TransformedWeight tw = make_primitive(power_weight(0.3, p), Anchor::closed_form());
  InequalitySpec spec = make_spec(tw, p, Interval::real_line(), Regime::r5_rg);
  Verdict v = verify(f, spec);
  CHECK(v.lhs.divergent());
  CHECK(v.rhs.finite());
  CHECK(v.admissibility.member == Member::no);
  CHECK(v.pass == Pass::inconclusive);
}

TEST_CASE("windowed verdict requires the weight along f") {
  TestFunction f = sine_bump();  // changes sign; log weight domain is (0, inf)
  TransformedWeight lg = make_primitive(log_reciprocal_weight(), Anchor::closed_form());
  InequalitySpec spec = make_spec(lg, 2.0, Interval(-1, 1), Regime::r3_general);
  CHECK_THROWS_AS(verify_windowed(f, spec, -0.9, 0.9), Error);
}

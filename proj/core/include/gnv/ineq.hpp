#pragma once

#include <optional>
#include <string>

#include "gnv/funcspace.hpp"
#include "gnv/quad.hpp"
#include "gnv/weights.hpp"

namespace gnv {

/// Verification regimes, one per admissibility class of the underlying results.
enum class Regime {
  r3_real_line,        // regular weight on the whole line, no restriction
  r3_general,          // general interval + weight domain [A,B], no restriction
  r4_positive,         // f > 0 on (a,b)
  r4_nonneg_hcont,     // f >= 0, h integrable near 0 (H extends continuously)
  r4_nonneg_monotone,  // f >= 0, h and |T|^{p/2}h bounded-or-nonincreasing near 0
  r5_double_zeroes,    // sign-changing excluded: f without single zeroes, |f| substitution
  r5_h_integrable,     // h integrable near 0, any f, |f| substitution
  r5_rg,               // G_h regime with the local-finiteness condition
};

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct Tolerances {
  double rel = 1e-6;
  double abs = 1e-12;
};

struct InequalitySpec {
  TransformedWeight weight;
  double p = 2;
  Interval window = Interval::real_line();
  Regime regime = Regime::r3_real_line;
  bool use_abs_f = false;  // substitute |f| inside h and T (section-5 regimes)
  Tolerances tol;
  CutoffSchedule schedule;
  QuadOptions quad;

  static bool regime_uses_abs(Regime r) {
    return r == Regime::r5_double_zeroes || r == Regime::r5_h_integrable || r == Regime::r5_rg;
  }
  static Restriction regime_restriction(Regime r) {
    switch (r) {
      case Regime::r3_real_line:
      case Regime::r3_general:
      case Regime::r4_positive:
        return Restriction::none;
      case Regime::r4_nonneg_hcont:
      case Regime::r4_nonneg_monotone:
        return Restriction::f_positive;
      default:
        return Restriction::f_nonzero;
    }
  }
};

InequalitySpec make_spec(TransformedWeight w, double p, Interval window, Regime regime);

enum class Member { yes, no, heuristic_yes, heuristic_no };
const char* member_name(Member m);

enum class SufficientCondition { none, deriv_support_bounded, mixed_integral_finite, both_integrals_finite };

struct AdmissibilityReport {
  Member member = Member::heuristic_no;
  SufficientCondition sufficient_condition_used = SufficientCondition::none;
  bool structural_ok = false;  // flags + weight classification required by the regime
  FunctionFlags flags;
  WeightClass weight_class;
  std::optional<BoundaryEstimate> lower_tail;
  std::optional<BoundaryEstimate> upper_tail;
  std::optional<CutoffReport> rg_local_report;  // r5_rg epsilon-local finiteness check
  std::string detail;
};

enum class Pass { holds, violated, inconclusive };
const char* pass_name(Pass p);

struct Verdict {
  CutoffReport lhs;
  CutoffReport rhs;
  double constant = 1;            // multiplies rhs
  std::optional<double> defect;   // theta(r,R) or heuristic L_-
  bool defect_heuristic = false;
  AdmissibilityReport admissibility;
  Pass pass = Pass::inconclusive;
  double slack = 0;  // constant*rhs + defect - lhs when both sides finite
  double tolerance_used = 0;
  std::string note;
};

CutoffReport lhs_integral(const TestFunction& f, const InequalitySpec& spec);
CutoffReport rhs_integral(const TestFunction& f, const InequalitySpec& spec);

/// Two-point boundary term theta(r,R) = [|f'|^{p-2} f' H(f)]_r^R.
double boundary_theta(const TestFunction& f, const TransformedWeight& tw, double p, double r,
                      double R);

AdmissibilityReport check_admissible(const TestFunction& f, const InequalitySpec& spec);

/// Defect-free verdict: lhs <= (sqrt(p-1))^p rhs within tolerances.
Verdict verify(const TestFunction& f, const InequalitySpec& spec);

/// Windowed verdict on [r,R] with defect theta(r,R); unconditional (no class).
Verdict verify_windowed(const TestFunction& f, const InequalitySpec& spec, double r, double R);

enum class PowerVariant { case1, case2, case3 };

/// Power-weight specialization: lhs = int (|f'|/|f|^theta)^p,
/// rhs = int (sqrt|f f''|/|f|^theta)^p, constant ((p-1)/|1-theta p|)^{p/2}.
Verdict specialize_power(const TestFunction& f, double theta, double p, PowerVariant variant);

/// The p = infinity variant: sup-norm comparison with constant 1/sqrt(theta).
struct SupVerdict {
  double lhs_sup = 0;
  double rhs_sup = 0;
  double constant = 0;
  bool lhs_divergent = false;  // sampled values grow without bound near a zero of f
  Pass pass = Pass::inconclusive;
};
SupVerdict sup_variant(const TestFunction& f, double theta);

/// Logarithmic weight variant: h = 1/lambda, H = ln lambda.
Verdict log_variant(const TestFunction& f, double p);

/// Exponential weight variant; case 2 uses the shifted primitive H1 and checks
/// the domination |H1(|f|)| < H(|f|) at sampled points.
Verdict exp_variant(const TestFunction& f, double p, double alpha, double beta, int case_no);

struct CounterexampleCase {
  double p = 4;
  double theta = 0.3;
  CutoffReport lhs;
  CutoffReport rhs;
  double expected_rate = 0;  // theta*p - 1 when divergence is expected
  bool lower_bound_ok = false;
  bool expected_divergent = false;
  Verdict holds_verdict;  // populated in the both-finite case
  bool ok = false;
};

struct CounterexampleReport {
  std::vector<CounterexampleCase> cases;
  bool all_ok = false;
};

/// Reproduces the sine-bump counterexample: lhs divergence with fitted rate for
/// theta > 1/p, finite rhs for theta <= 1/2, and the sampled lower bound
/// |f'|/|f|^theta >= pi sqrt(2) (2 pi)^{-theta} |x|^{-theta} on (-1/8, 1/8).
CounterexampleReport counterexample_run();
CounterexampleCase counterexample_case(double p, double theta);

}  // namespace gnv

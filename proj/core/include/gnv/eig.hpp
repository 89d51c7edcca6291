#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gnv/funcspace.hpp"
#include "gnv/quad.hpp"

namespace gnv {

/// Nonlinearity tau on (0, inf); tau' is required for the q = 1 branch.
struct Nonlinearity {
  std::function<double(double)> tau;
  std::function<double(double)> tau_prime;  // may be empty
  enum class Family { power, custom } family = Family::custom;
  double alpha = 0;  // exponent for the power family
};

Nonlinearity power_nonlinearity(double alpha);
Nonlinearity custom_nonlinearity(std::function<double(double)> tau,
                                 std::function<double(double)> tau_prime = {});

/// The three derived transforms of tau for exponent q:
///   q > 1: k = tau^{q/(q-1)}, K its constant-sign primitive,
///          h = (q-1)^q |K|^{-q} k, H = -sgn(K)(q-1)^{q-1}|K|^{1-q};
///   q = 1: h = |tau'|/tau^2, H = -sgn(tau')/tau;
///   G a primitive of h^{1/(2q)}.
struct DerivedTransforms {
  double q = 2;
  bool closed_form = false;
  double alpha = 0;  // set for the power family
  std::function<double(double)> k;  // empty for q = 1
  std::function<double(double)> K;  // empty for q = 1
  std::function<double(double)> h;
  std::function<double(double)> H;
  std::function<double(double)> G;
  std::string anchor_note;

  double T(double lambda) const {  // H/h with the usual zero convention
    double hv = h(lambda);
    return hv != 0 ? H(lambda) / hv : 0.0;
  }
};

DerivedTransforms derive_transforms(const Nonlinearity& tau, double q);

/// Force the generic numeric pipeline (q > 1) with a chosen value K(1); used to
/// cross-check the closed forms against the definition-level construction.
DerivedTransforms derive_transforms_numeric(const Nonlinearity& tau, double q, double K_at_1);

/// Exact endpoint limits of (f, f') used to certify boundary conditions
/// analytically on manufactured fixtures.
struct EndpointData {
  double f_a = 0, fp_a = 0;
  double f_b = 0, fp_b = 0;
};

struct EigenProblem {
  Nonlinearity tau;
  double q = 2;
  std::function<double(double)> g;
  Interval window = Interval(0, 1);
  TestFunction f;
  std::string boundary_note;
  std::optional<EndpointData> endpoints;  // set for manufactured fixtures
};

enum class BoundaryCert { analytic, heuristic, failed };
const char* boundary_cert_name(BoundaryCert c);

/// Sign condition liminf_b |f'|^{2q-2} f' H(f) - limsup_a (same) <= 0,
/// evaluated exactly from endpoint data when available.
BoundaryCert check_boundary_condition(const EigenProblem& prob, const DerivedTransforms& dt,
                                      double* value = nullptr);

/// Max relative discrepancy between |g|^q, |f''/tau(f)|^q and |T_h(f) f''|^q h(f).
double identity_residual(const EigenProblem& prob, const DerivedTransforms& dt,
                         int samples = 512);

/// g = f''/tau(f); exact by construction.
std::function<double(double)> manufacture(const TestFunction& f, const Nonlinearity& tau);

/// Adaptive RK (Dormand–Prince 5(4)) for y'' = g(t) tau(y) with dense output;
/// jets of the returned function recover y'' from the equation itself.
TestFunction integrate_ivp(const Nonlinearity& tau, const std::function<double(double)>& g,
                           double t0, double y0, double y0p, double t1, double tol = 1e-10);

struct EstimateI {
  double lhs = 0;      // int |f'|^{2q} h(f)
  double bound = 0;    // (2q-1)^q int |g|^q
  double ratio = 0;
  bool pass = false;
  BoundaryCert boundary = BoundaryCert::heuristic;
};
EstimateI estimate_i(const EigenProblem& prob, const DerivedTransforms& dt);

struct HolderResult {
  double seminorm = 0;  // max over sampled pairs of |F(x)-F(y)|/|x-y|^{1-1/(2q)}
  double bound = 0;     // sqrt(2q-1) (int |g|^q)^{1/(2q)}
  double exponent = 0;
  double x_argmax = 0, y_argmax = 0;
  bool pass = false;
};
HolderResult holder_check(const EigenProblem& prob, const DerivedTransforms& dt,
                          int pair_samples = 2000);

struct PointwiseResult {
  double max_violation = 0;  // max over grid of f(x) - bound(x)
  double tolerance = 0;
  bool pass = false;
};
/// Pointwise bound |f(x)| <= |G|^{-1}(|G(f(c))| + |x-c|^{1-1/(2q)} sqrt(2q-1) ||g||_q^... ),
/// with |G|^{-1} by monotone bisection. Throws errc::not_monotone when |G| is
/// not strictly monotone on the needed range (e.g. alpha = 1).
PointwiseResult pointwise_bound(const EigenProblem& prob, const DerivedTransforms& dt, double c);
/// Endpoint-anchored variant (continuation of f up to the endpoint).
PointwiseResult pointwise_bound_endpoint(const EigenProblem& prob, const DerivedTransforms& dt,
                                         Endpoint e);

struct W2qResult {
  double lhs = 0;    // (int_a^x |f''|^q)^{1/q}
  double bound = 0;  // D_c(x) ||g||_{L^q(a,x)}
  double A_c = 0;
  double D_c = 0;
  bool pass = false;
};
W2qResult w2q_bound(const EigenProblem& prob, const DerivedTransforms& dt, double c, double x);

struct EstimateConstants {
  double q = 0;
  double two_q_minus_one_pow_q = 0;  // (2q-1)^q
  double sqrt_two_q_minus_one = 0;   // sqrt(2q-1)
  double homog_constant_i = 0;       // ((2q-1)/|q-1+alpha q|)^q
  double A_q = 0;                    // sqrt(2q-1) |q-1+alpha q|^{-1/2} |(1-alpha)/2|
};
EstimateConstants homogeneous_constants(double q, double alpha);

struct EstimateReport {
  EstimateConstants constants;
  double identity_residual_value = 0;
  EstimateI i;
  HolderResult holder;
  std::optional<PointwiseResult> pointwise;  // only when |G| monotone (alpha < 1)
  std::optional<W2qResult> w2q;
  bool all_pass = false;
};

/// Direct checks of the homogeneous-nonlinearity estimates (power tau).
EstimateReport homogeneous_suite(double q, double alpha, const EigenProblem& prob);

/// Full report for a general problem via the derived transforms.
EstimateReport estimate_report(const EigenProblem& prob, const DerivedTransforms& dt);

// Model right-hand sides for the demonstration ODEs.
struct ModelProblem {
  Nonlinearity tau;
  std::function<double(double)> g;
  std::string name;
};
ModelProblem model_registry(const std::string& name,
                            const std::map<std::string, double>& params = {});

}  // namespace gnv

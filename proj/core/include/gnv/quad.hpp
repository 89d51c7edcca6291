#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gnv/common.hpp"
#include "gnv/funcspace.hpp"

namespace gnv {

enum class QuadStatus { converged, max_subdivisions, divergent_suspected };

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  int subdivisions = 0;
  QuadStatus status = QuadStatus::converged;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_evals = 1'000'000;
};

/// Adaptive Gauss–Kronrod 15(7) over a finite window. The interval is
/// pre-split at the supplied knots before adaptivity starts.
QuadratureResult integrate(const std::function<double(double)>& g, Interval window,
                           const QuadOptions& opt = {}, std::span<const double> knots = {});

/// Same, but infinite endpoints are allowed (compactifying substitution).
QuadratureResult integrate_improper(const std::function<double(double)>& g, Interval window,
                                    const QuadOptions& opt = {},
                                    std::span<const double> knots = {});

enum class CutoffVerdict { finite_limit, divergent, inconclusive };

struct CutoffReport {
  std::vector<std::pair<double, double>> schedule;  // (delta, integral over kept set)
  CutoffVerdict verdict = CutoffVerdict::inconclusive;
  double value = 0;          // extrapolated limit when finite
  double error = 0;          // extrapolation error estimate when finite
  double quad_error = 0;     // summed quadrature error of the last schedule entry
  double rate_exponent = 0;  // fitted r in v(delta) ~ delta^{-r} when divergent
  double fit_r2 = 0;

  bool finite() const { return verdict == CutoffVerdict::finite_limit; }
  bool divergent() const { return verdict == CutoffVerdict::divergent; }
};

enum class Restriction { none, f_nonzero, f_positive };

struct CutoffSchedule {
  int k_min = 4;
  int k_max = 24;
  double scale = 0.0;  // delta_k = scale * 2^{-k}; <= 0 means max|f| on the window
};

/// Integrate g over window minus the {|f| <= delta} (or {f <= delta}) set for a
/// shrinking delta schedule, then extrapolate to a limit or certify divergence.
CutoffReport integrate_excluding(const std::function<double(double)>& g, const TestFunction& f,
                                 Interval window, Restriction restriction,
                                 CutoffSchedule sched = {}, const QuadOptions& opt = {});

/// Cutoff analysis of a plain one-endpoint improper integral
/// integral_{a+delta}^{b} g (or mirrored); used for integrability classification.
CutoffReport cutoff_integral(const std::function<double(double)>& g, Interval window,
                             bool shrink_lower, CutoffSchedule sched = {},
                             const QuadOptions& opt = {});

enum class Endpoint { lower, upper };

/// Heuristic tail bracket for liminf/limsup of expr toward one endpoint.
struct BoundaryEstimate {
  Endpoint endpoint = Endpoint::lower;
  double tail_inf = 0;
  double tail_sup = 0;
  std::vector<std::pair<double, double>> samples;  // (x, expr(x))
  bool heuristic = true;                           // always true: sampling cannot certify a liminf
  bool eval_ok = true;
};

BoundaryEstimate boundary_limit(const std::function<double(double)>& expr, Interval window,
                                Endpoint endpoint, int K = 40);

/// Kept subintervals of {x in window : |f(x)| > delta} (or {f > delta}).
std::vector<Interval> superlevel_intervals(const TestFunction& f, Interval window, double delta,
                                           Restriction restriction, int grid_n = 2048);

/// Numeric primitive F(x) = c0 + integral_{x0}^{x} fun of a locally integrable
/// callable: a read-only breakpoint/prefix table refined toward finite domain
/// edges, with a local adaptive correction per evaluation.
class Antiderivative {
 public:
  Antiderivative(std::function<double(double)> fun, Interval domain, double x0, double c0);
  double operator()(double x) const;

 private:
  std::function<double(double)> fun_;
  std::vector<double> grid_;
  std::vector<double> cum_;
};

}  // namespace gnv

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnv/common.hpp"

namespace gnv {

/// Pointwise 2-jet of a test function: (f, f', f'').
struct Jet {
  double f = 0;
  double fp = 0;
  double fpp = 0;
};

struct FunctionFlags {
  bool nonnegative = false;
  bool strictly_positive = false;
  bool no_single_zeroes = false;
};

enum class ZeroKind { single, double_zero, flat_interval };

struct Zero {
  double location = 0;
  ZeroKind kind = ZeroKind::double_zero;
  // Extent for flat-interval zeroes; lo == hi == location for point zeroes.
  double lo = 0;
  double hi = 0;
};

struct ZeroSet {
  std::vector<Zero> zeros;
  double resolution = 0;
  bool has_single() const {
    for (const auto& z : zeros)
      if (z.kind == ZeroKind::single) return true;
    return false;
  }
};

/// A function in W^{2,1}_loc represented by an exact jet callable.
/// Immutable after construction; evaluation is reentrant.
class TestFunction {
 public:
  TestFunction(Interval domain, std::function<Jet(double)> jet, std::string family_tag,
               std::optional<Interval> deriv_support = std::nullopt,
               std::vector<double> knots = {});

  Jet eval_jet(double x) const;  // throws errc::out_of_domain outside the open domain
  double value(double x) const { return eval_jet(x).f; }

  const Interval& domain() const { return domain_; }
  const std::optional<Interval>& deriv_support() const { return deriv_support_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::string& family_tag() const { return family_tag_; }

 private:
  Interval domain_;
  std::function<Jet(double)> jet_;
  std::string family_tag_;
  std::optional<Interval> deriv_support_;
  std::vector<double> knots_;  // sorted points where f'' may jump or integrands should split
};

// Built-in analytic families.
TestFunction poly_bump(int k);                 // (1-x^2)^k extended by zero, k >= 2
TestFunction smooth_bump();                    // exp(1 - 1/(1-x^2)) extended by zero
TestFunction sine_bump();                      // phi(x) sin(2 pi x), smooth-step plateau profile
TestFunction power_profile(double m);          // x^m (1-x)^m on (0,1), m >= 1
TestFunction affine_plus_parabola(double a0, double a1, double a2,
                                  Interval dom = Interval(0, 1));
TestFunction constant_function(double c, Interval dom = Interval::real_line());

// Natural C^2 cubic spline through strictly increasing samples.
TestFunction spline_from_samples(std::span<const double> xs, std::span<const double> ys);
// Two-column text file (x, f(x)); '#' comments allowed.
TestFunction spline_from_file(const std::string& path);

// Name + parameter registry used by the CLI config surface.
TestFunction build_family(const std::string& name,
                          const std::map<std::string, double>& params = {});

// x -> f(s x) and x -> c f(x); used by the invariance suites.
TestFunction dilate(const TestFunction& f, double s);
TestFunction scale(const TestFunction& f, double c);

ZeroSet locate_zeros(const TestFunction& f, Interval window, double resolution = 0);
FunctionFlags classify_function(const TestFunction& f, Interval window);

// Smooth step S: 0 for t<=0, 1 for t>=1, exp-based in between (with derivatives).
Jet smooth_step_jet(double t);

}  // namespace gnv

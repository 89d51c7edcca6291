#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gnv {

enum class errc {
  out_of_domain,
  bad_params,
  singular_params,
  not_integrable_at_zero,
  hypothesis_fail,
  alpha_singular,
  sign_fail,
  nonpositive_f,
  positivity_lost,
  step_underflow,
  eval_fail,
  not_monotone,
  not_proper,
  config_error,
};

const char* errc_name(errc c);

/// Library error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (a, b) with extended-real endpoints.
struct Interval {
  double a = -kInf;
  double b = kInf;

  Interval() = default;
  Interval(double lo, double hi) : a(lo), b(hi) {
    if (!(a < b)) throw Error(errc::bad_params, "interval requires a < b");
  }

  static Interval real_line() { return Interval(-kInf, kInf); }

  bool lower_finite() const { return std::isfinite(a); }
  bool upper_finite() const { return std::isfinite(b); }
  bool finite() const { return lower_finite() && upper_finite(); }
  double length() const { return b - a; }
  bool contains(double x) const { return x > a && x < b; }
  bool contains(const Interval& o) const { return o.a >= a && o.b <= b; }
  Interval intersect(const Interval& o) const {
    return Interval(std::max(a, o.a), std::min(b, o.b));
  }
};

}  // namespace gnv

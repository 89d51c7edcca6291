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

/// Nonnegative continuous weight h on an open interval (A, B), with an optional
/// closed-form primitive registered alongside.
class Weight {
 public:
  Weight(Interval domain, std::function<double(double)> h, std::string family_tag,
         std::optional<std::function<double(double)>> closed_primitive = std::nullopt,
         std::string primitive_note = {}, bool zero_set_countable = true);

  double h(double lambda) const;
  const Interval& domain() const { return domain_; }
  const std::string& family_tag() const { return family_tag_; }
  bool has_closed_primitive() const { return closed_primitive_.has_value(); }
  double closed_primitive(double lambda) const;
  const std::string& primitive_note() const { return primitive_note_; }
  bool zero_set_countable() const { return zero_set_countable_; }

 private:
  Interval domain_;
  std::function<double(double)> h_;
  std::string family_tag_;
  std::optional<std::function<double(double)>> closed_primitive_;
  std::string primitive_note_;
  bool zero_set_countable_;
};

enum class AnchorKind { closed_form, zero_anchored, point_anchored };

struct Anchor {
  AnchorKind kind = AnchorKind::closed_form;
  double lambda0 = 0;  // point_anchored: H(lambda0) = c
  double c = 0;

  static Anchor closed_form() { return {AnchorKind::closed_form, 0, 0}; }
  static Anchor zero_anchored() { return {AnchorKind::zero_anchored, 0, 0}; }
  static Anchor point_anchored(double lambda0, double c) {
    return {AnchorKind::point_anchored, lambda0, c};
  }
};

enum class ExtensionKind { none, continuous_limit, convention_zero };

/// The triple (H, T_h, G_h): primitive, transform H/h (0 on zeroes of h), and
/// the auxiliary G_h(lambda) = |T_h|^{p/2} h / lambda^{p/2}.
class TransformedWeight {
 public:
  TransformedWeight() = default;
  TransformedWeight(std::shared_ptr<const Weight> w, std::function<double(double)> H,
                    Anchor anchor, std::string anchor_note,
                    std::optional<double> H_tilde_zero, ExtensionKind ext_kind);

  double h(double lambda) const { return weight_->h(lambda); }
  double H(double lambda) const { return H_(lambda); }
  double T(double lambda) const;                 // H/h, 0 where h vanishes
  double G(double lambda, double p) const;       // |T|^{p/2} h / lambda^{p/2}
  const Weight& weight() const { return *weight_; }
  std::shared_ptr<const Weight> weight_ptr() const { return weight_; }
  const Anchor& anchor() const { return anchor_; }
  const std::string& anchor_note() const { return anchor_note_; }

  /// Value assigned to H at 0 for the section-4/5 regimes, when one exists.
  std::optional<double> H_tilde_zero() const { return H_tilde_zero_; }
  ExtensionKind extension_kind() const { return ext_kind_; }
  /// H evaluated with the extension convention: returns H_tilde(0) at lambda == 0.
  double H_tilde(double lambda) const;

 private:
  std::shared_ptr<const Weight> weight_;
  std::function<double(double)> H_;
  Anchor anchor_;
  std::string anchor_note_;
  std::optional<double> H_tilde_zero_;
  ExtensionKind ext_kind_ = ExtensionKind::none;
};

struct WeightClass {
  bool bounded_near_zero = false;
  bool nonincreasing_near_zero = false;
  bool integrable_near_zero = false;
  bool T_half_p_h_bounded_near_zero = false;
  bool T_half_p_h_nonincreasing_near_zero = false;
  bool G_bounded_or_nonincreasing_near_zero = false;
  double epsilon_used = 0.5;

  // Hypothesis of the nonnegative-f monotone regime: h and |T|^{p/2}h each
  // bounded or nonincreasing near 0.
  bool monotone_regime_ok() const {
    return (bounded_near_zero || nonincreasing_near_zero) &&
           (T_half_p_h_bounded_near_zero || T_half_p_h_nonincreasing_near_zero);
  }
  // Extra hypothesis of the G_h regime.
  bool rg_regime_ok() const {
    return monotone_regime_ok() &&
           (T_half_p_h_nonincreasing_near_zero || G_bounded_or_nonincreasing_near_zero);
  }
};

TransformedWeight make_primitive(std::shared_ptr<const Weight> w, Anchor anchor);
inline TransformedWeight make_primitive(const Weight& w, Anchor anchor) {
  return make_primitive(std::make_shared<Weight>(w), anchor);
}

double transform_value(const TransformedWeight& tw, double lambda);

WeightClass classify_weight(const TransformedWeight& tw, double p, double epsilon = 0.5);

/// Named weights with the primitives fixed by the worked examples:
///   unit; power(theta, p): lambda^{-theta p}, H = lambda^{1-theta p}/(1-theta p);
///   log_reciprocal: 1/lambda, H = ln lambda;
///   exponential(alpha, beta): lambda^{beta-1} e^{alpha lambda^beta}, H = e^{alpha lambda^beta}/(alpha beta).
Weight registry(const std::string& name, const std::map<std::string, double>& params = {});

Weight unit_weight();
Weight power_weight(double theta, double p);
Weight log_reciprocal_weight();
Weight exponential_weight(double alpha, double beta);
Weight weight_from_samples(std::span<const double> xs, std::span<const double> hs);
Weight weight_from_file(const std::string& path);

/// The shifted primitive H1 = (e^{alpha lambda^beta} - 1)/(alpha beta) used by the
/// exponential example's second case (vanishes at 0).
TransformedWeight exponential_shifted_primitive(double alpha, double beta);

}  // namespace gnv

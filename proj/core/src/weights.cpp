#include "gnv/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gnv/funcspace.hpp"
#include "gnv/quad.hpp"

namespace gnv {

Weight::Weight(Interval domain, std::function<double(double)> h, std::string family_tag,
               std::optional<std::function<double(double)>> closed_primitive,
               std::string primitive_note, bool zero_set_countable)
    : domain_(domain),
      h_(std::move(h)),
      family_tag_(std::move(family_tag)),
      closed_primitive_(std::move(closed_primitive)),
      primitive_note_(std::move(primitive_note)),
      zero_set_countable_(zero_set_countable) {}

double Weight::h(double lambda) const {
  if (!domain_.contains(lambda))
    throw Error(errc::out_of_domain,
                "weight " + family_tag_ + " evaluated at lambda=" + std::to_string(lambda));
  return h_(lambda);
}

double Weight::closed_primitive(double lambda) const {
  if (!closed_primitive_) throw Error(errc::bad_params, "weight has no closed-form primitive");
  return (*closed_primitive_)(lambda);
}

TransformedWeight::TransformedWeight(std::shared_ptr<const Weight> w,
                                     std::function<double(double)> H, Anchor anchor,
                                     std::string anchor_note, std::optional<double> H_tilde_zero,
                                     ExtensionKind ext_kind)
    : weight_(std::move(w)),
      H_(std::move(H)),
      anchor_(anchor),
      anchor_note_(std::move(anchor_note)),
      H_tilde_zero_(H_tilde_zero),
      ext_kind_(ext_kind) {}

double TransformedWeight::T(double lambda) const {
  double hv = weight_->h(lambda);
  if (hv == 0.0) return 0.0;
  return H_(lambda) / hv;
}

double TransformedWeight::G(double lambda, double p) const {
  double hv = weight_->h(lambda);
  if (hv == 0.0) return 0.0;
  return std::pow(std::abs(T(lambda)), 0.5 * p) * hv / std::pow(std::abs(lambda), 0.5 * p);
}

double TransformedWeight::H_tilde(double lambda) const {
  if (lambda == 0.0 && !weight_->domain().contains(0.0)) {
    if (!H_tilde_zero_)
      throw Error(errc::eval_fail, "H has no extension value at 0 for this weight/anchor");
    return *H_tilde_zero_;
  }
  return H_(lambda);
}

double transform_value(const TransformedWeight& tw, double lambda) { return tw.T(lambda); }

// ---------------------------------------------------------------------------
// numeric primitives: breakpoint table + local adaptive correction
// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Antiderivative> weight_primitive(std::shared_ptr<const Weight> w, double lambda0,
                                                 double c) {
  auto hfun = [w](double x) { return w->h(x); };
  return std::make_shared<Antiderivative>(hfun, w->domain(), lambda0, c);
}

// Probe the limit of H at the lower domain edge 0: continuous extension when
// the sampled differences contract geometrically, otherwise the H~(0) = 0
// convention.
std::pair<std::optional<double>, ExtensionKind> probe_extension_at_zero(
    const std::function<double(double)>& H, const Interval& dom) {
  if (dom.a != 0.0) {
    if (dom.contains(0.0)) return {H(0.0), ExtensionKind::continuous_limit};
    return {std::nullopt, ExtensionKind::none};
  }
  double eps = dom.upper_finite() ? std::min(0.5, 0.25 * dom.length()) : 0.5;
  double h40 = H(eps * std::pow(0.5, 40));
  double h60 = H(eps * std::pow(0.5, 60));
  double h80 = H(eps * std::pow(0.5, 80));
  double span = std::max({std::abs(h40), std::abs(h60), std::abs(h80), 1.0});
  double d1 = std::abs(h60 - h40);
  double d2 = std::abs(h80 - h60);
  bool settled = d1 <= 1e-10 * span && d2 <= 1e-10 * span;
  bool contracting = d2 <= 0.5 * d1;
  if (settled || contracting) {
    double limit = h80;
    if (contracting && d1 > 0) {
      double rho = d2 / d1;  // contraction per 20 halvings
      limit += (h80 - h60) * rho / (1.0 - rho);
    }
    return {limit, ExtensionKind::continuous_limit};
  }
  return {0.0, ExtensionKind::convention_zero};
}

}  // namespace

TransformedWeight make_primitive(std::shared_ptr<const Weight> w, Anchor anchor) {
  const Interval& dom = w->domain();
  std::function<double(double)> H;
  std::string note;

  switch (anchor.kind) {
    case AnchorKind::closed_form: {
      if (!w->has_closed_primitive())
        throw Error(errc::bad_params,
                    "weight " + w->family_tag() + " has no registered closed-form primitive");
      auto wp = w;
      H = [wp](double lambda) { return wp->closed_primitive(lambda); };
      note = "closed_form: " + w->primitive_note();
      break;
    }
    case AnchorKind::zero_anchored: {
      if (dom.contains(0.0)) {
        auto prim = weight_primitive(w, 0.0, 0.0);
        H = [prim](double lambda) { return (*prim)(lambda); };
      } else if (dom.a == 0.0) {
        double eps = dom.upper_finite() ? std::min(0.5, 0.25 * dom.length()) : 0.5;
        auto wp = w;
        auto hfun = [wp](double x) { return wp->h(x); };
        CutoffReport rep = cutoff_integral(hfun, Interval(0.0, eps), /*shrink_lower=*/true);
        if (!rep.finite())
          throw Error(errc::not_integrable_at_zero,
                      "weight " + w->family_tag() + " is not integrable near 0");
        auto prim = weight_primitive(w, eps, rep.value);
        H = [prim](double lambda) { return (*prim)(lambda); };
      } else {
        throw Error(errc::bad_params, "zero_anchored needs 0 in the closure of the domain");
      }
      note = "zero_anchored: H(x) = integral_0^x h";
      return TransformedWeight(w, H, anchor, note, 0.0, ExtensionKind::continuous_limit);
    }
    case AnchorKind::point_anchored: {
      auto prim = weight_primitive(w, anchor.lambda0, anchor.c);
      H = [prim](double lambda) { return (*prim)(lambda); };
      std::ostringstream os;
      os << "point_anchored: H(" << anchor.lambda0 << ") = " << anchor.c;
      note = os.str();
      break;
    }
  }

  auto [hz, ext] = probe_extension_at_zero(H, dom);
  return TransformedWeight(w, H, anchor, note, hz, ext);
}

// ---------------------------------------------------------------------------
// near-zero classification
// ---------------------------------------------------------------------------

namespace {

struct GridFlags {
  bool nonincreasing = false;
  bool bounded = false;
};

GridFlags grid_flags(const std::function<double(double)>& v, double eps, int kmax = 40) {
  GridFlags gf;
  gf.nonincreasing = true;
  std::vector<double> vals;
  vals.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) vals.push_back(v(eps * std::pow(0.5, k)));
  for (int k = 0; k + 1 <= kmax; ++k) {
    // moving toward zero, a nonincreasing function cannot drop
    double tol = 1e-12 * std::max(std::abs(vals[k]), std::abs(vals[k + 1]));
    if (vals[k + 1] < vals[k] - tol) gf.nonincreasing = false;
  }
  double head = 0, tail = 0;
  for (int k = 0; k <= std::min(8, kmax); ++k) head = std::max(head, std::abs(vals[k]));
  for (int k = 9; k <= kmax; ++k) tail = std::max(tail, std::abs(vals[k]));
  gf.bounded = tail <= head * (1.0 + 1e-6) + 1e-12 * (1.0 + head);
  return gf;
}

}  // namespace

WeightClass classify_weight(const TransformedWeight& tw, double p, double epsilon) {
  const Interval& dom = tw.weight().domain();
  WeightClass wc;
  if (dom.a > 0.0) return wc;  // near-zero behaviour undefined for such weights
  double eps = epsilon;
  if (dom.upper_finite()) eps = std::min(eps, 0.5 * dom.b);
  wc.epsilon_used = eps;

  auto hfun = [&tw](double x) { return tw.h(x); };
  auto thp = [&tw, p](double x) {
    return std::pow(std::abs(tw.T(x)), 0.5 * p) * tw.h(x);
  };
  auto gfun = [&tw, p](double x) { return tw.G(x, p); };

  GridFlags fh = grid_flags(hfun, eps);
  GridFlags ft = grid_flags(thp, eps);
  GridFlags fg = grid_flags(gfun, eps);
  wc.bounded_near_zero = fh.bounded;
  wc.nonincreasing_near_zero = fh.nonincreasing;
  wc.T_half_p_h_bounded_near_zero = ft.bounded;
  wc.T_half_p_h_nonincreasing_near_zero = ft.nonincreasing;
  wc.G_bounded_or_nonincreasing_near_zero = fg.bounded || fg.nonincreasing;

  if (fh.bounded) {
    wc.integrable_near_zero = true;
  } else if (dom.a == 0.0) {
    CutoffReport rep = cutoff_integral(hfun, Interval(0.0, eps), /*shrink_lower=*/true);
    wc.integrable_near_zero = rep.finite();
  } else {
    wc.integrable_near_zero = true;  // 0 interior, h continuous there
  }
  return wc;
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

Weight unit_weight() {
  return Weight(Interval::real_line(), [](double) { return 1.0; }, "unit",
                [](double lambda) { return lambda; }, "H(lambda) = lambda");
}

Weight power_weight(double theta, double p) {
  double tp = theta * p;
  if (std::abs(1.0 - tp) < 1e-12)
    throw Error(errc::singular_params,
                "power weight needs theta*p != 1 (the logarithmic weight covers that case)");
  std::ostringstream tag;
  tag << "power(theta=" << theta << ",p=" << p << ")";
  return Weight(
      Interval(0.0, kInf), [tp](double lambda) { return std::pow(lambda, -tp); }, tag.str(),
      [tp](double lambda) { return std::pow(lambda, 1.0 - tp) / (1.0 - tp); },
      "H(lambda) = lambda^{1-theta p}/(1-theta p)");
}

Weight log_reciprocal_weight() {
  return Weight(Interval(0.0, kInf), [](double lambda) { return 1.0 / lambda; },
                "log_reciprocal", [](double lambda) { return std::log(lambda); },
                "H(lambda) = ln lambda");
}

Weight exponential_weight(double alpha, double beta) {
  if (alpha == 0.0) throw Error(errc::singular_params, "exponential weight needs alpha != 0");
  if (beta < 1.0) throw Error(errc::singular_params, "exponential weight needs beta >= 1");
  std::ostringstream tag;
  tag << "exponential(alpha=" << alpha << ",beta=" << beta << ")";
  Interval dom = beta == 1.0 ? Interval::real_line() : Interval(0.0, kInf);
  auto h = [alpha, beta](double lambda) {
    if (beta == 1.0) return std::exp(alpha * lambda);
    return std::pow(lambda, beta - 1.0) * std::exp(alpha * std::pow(lambda, beta));
  };
  auto H = [alpha, beta](double lambda) {
    if (beta == 1.0) return std::exp(alpha * lambda) / alpha;
    return std::exp(alpha * std::pow(lambda, beta)) / (alpha * beta);
  };
  return Weight(dom, h, tag.str(), H, "H(lambda) = e^{alpha lambda^beta}/(alpha beta)");
}

TransformedWeight exponential_shifted_primitive(double alpha, double beta) {
  auto w = std::make_shared<Weight>(exponential_weight(alpha, beta));
  auto H1 = [alpha, beta](double lambda) {
    double z = beta == 1.0 ? lambda : std::pow(lambda, beta);
    return (std::exp(alpha * z) - 1.0) / (alpha * beta);
  };
  return TransformedWeight(w, H1, Anchor::closed_form(),
                           "H1(lambda) = (e^{alpha lambda^beta} - 1)/(alpha beta)", 0.0,
                           ExtensionKind::continuous_limit);
}

Weight weight_from_samples(std::span<const double> xs, std::span<const double> hs) {
  for (double v : hs)
    if (v < 0) throw Error(errc::bad_params, "tabulated weight must be nonnegative");
  TestFunction sp = spline_from_samples(xs, hs);
  auto spp = std::make_shared<TestFunction>(std::move(sp));
  auto h = [spp](double lambda) { return std::max(0.0, spp->value(lambda)); };
  return Weight(spp->domain(), h, "tabulated", std::nullopt, {}, true);
}

Weight weight_from_file(const std::string& path) {
  TestFunction sp = spline_from_file(path);
  auto spp = std::make_shared<TestFunction>(std::move(sp));
  auto h = [spp](double lambda) { return std::max(0.0, spp->value(lambda)); };
  return Weight(spp->domain(), h, "tabulated:" + path, std::nullopt, {}, true);
}

namespace {
double wparam(const std::map<std::string, double>& params, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (fallback) return *fallback;
  throw Error(errc::bad_params, "missing weight parameter '" + key + "'");
}
}  // namespace

Weight registry(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "unit") return unit_weight();
  if (name == "power") return power_weight(wparam(params, "theta"), wparam(params, "p"));
  if (name == "log_reciprocal") return log_reciprocal_weight();
  if (name == "exponential")
    return exponential_weight(wparam(params, "alpha", 1.0), wparam(params, "beta", 1.0));
  throw Error(errc::bad_params, "unknown weight '" + name + "'");
}

}  // namespace gnv

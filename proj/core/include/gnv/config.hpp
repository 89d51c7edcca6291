#pragma once

#include <map>
#include <string>
#include <vector>

#include "gnv/ineq.hpp"

namespace gnv {

/// "name" or "name:key=val,key=val" spec strings used for functions, weights
/// and nonlinearities in config files and on the command line.
struct NamedSpec {
  std::string name;
  std::map<std::string, double> params;
  std::string raw;
};
NamedSpec parse_named_spec(const std::string& text);

enum class Expectation { holds, divergent_lhs, any };
const char* expectation_name(Expectation e);

/// One sub-matrix: functions x weights x p values under a fixed regime.
struct CaseBlock {
  std::vector<NamedSpec> functions;
  std::vector<NamedSpec> weights;
  std::vector<double> p_values;
  Regime regime = Regime::r3_real_line;
  Interval window = Interval::real_line();
  Expectation expect = Expectation::holds;
};

/// One eigenvalue-pipeline problem (manufactured pair or integrated model).
struct EigBlock {
  enum class Kind { manufactured, model } kind = Kind::manufactured;
  NamedSpec f;                     // manufactured: function family
  NamedSpec tau;                   // power:alpha=... (or custom later)
  double q = 2;
  Interval window = Interval(0, 1);
  std::vector<std::string> checks;  // identity, i, holder, pointwise, w2q, homog
  double perturb_g = 0;             // nonzero: negative control g + perturb_g
  // model problems
  std::string model;
  std::map<std::string, double> model_params;
  double t0 = 0.1, y0 = 1.0, yp0 = 0.0, t1 = 1.0;
};

struct CampaignConfig {
  Tolerances tol;
  std::vector<CaseBlock> cases;
  std::vector<EigBlock> eig;
};

CampaignConfig parse_config_file(const std::string& path);
CampaignConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

}  // namespace gnv

#pragma once

#include <array>
#include <string>
#include <vector>

#include "gnv/config.hpp"
#include "gnv/eig.hpp"
#include "gnv/ineq.hpp"

namespace gnv {

struct CaseResult {
  std::size_t index = 0;
  std::string function;
  std::string weight;
  double p = 0;
  Regime regime = Regime::r3_real_line;
  Expectation expect = Expectation::holds;
  Verdict verdict;
  bool expectation_met = false;
  std::string error;  // nonempty when the case could not be evaluated
};

struct VerifyCampaignResult {
  std::vector<CaseResult> rows;
  int n_holds = 0, n_violated = 0, n_inconclusive = 0, n_errors = 0, n_unexpected = 0;
  int exit_code = 0;  // 0: no violated; 2: any violated
};

VerifyCampaignResult run_verify_campaign(const CampaignConfig& cfg, int jobs = 1);

struct OdeCheckRow {
  std::string check;
  double measured = 0;
  double bound = 0;
  bool pass = false;
  std::string note;
};

struct OdeResult {
  std::size_t index = 0;
  std::string label;
  std::vector<OdeCheckRow> checks;
  bool all_pass = false;
  std::string error;
  // dense samples of integrated models for external plotting: t, y, y', y''
  std::vector<std::array<double, 4>> solution;
};

struct OdeCampaignResult {
  std::vector<OdeResult> rows;
  int exit_code = 0;  // 2 when any enabled check fails
};

OdeCampaignResult run_ode_campaign(const CampaignConfig& cfg);

// Instantiation helpers shared by the campaign and the CLI.
TestFunction instantiate_function(const NamedSpec& spec);
TransformedWeight instantiate_weight(const NamedSpec& spec, double p);
EigenProblem instantiate_manufactured(const EigBlock& block);

/// Fail fast on unresolvable family/weight/model names: rethrows as
/// errc::config_error with the offending spec named.
void validate_config(const CampaignConfig& cfg);

// CSV / JSON renderers (fixed %.12e float formatting; byte-stable output).
std::string verify_csv(const VerifyCampaignResult& res);
std::string verify_json(const VerifyCampaignResult& res);
std::string ode_csv(const OdeCampaignResult& res);
std::string ode_json(const OdeCampaignResult& res);
std::string solution_csv(const OdeResult& row);
std::string counterexample_csv(const CounterexampleReport& rep);
std::string format_double(double v);

}  // namespace gnv

#include "gnv/common.hpp"

namespace gnv {

const char* errc_name(errc c) {
  switch (c) {
    case errc::out_of_domain: return "OUT_OF_DOMAIN";
    case errc::bad_params: return "BAD_PARAMS";
    case errc::singular_params: return "SINGULAR_PARAMS";
    case errc::not_integrable_at_zero: return "NOT_INTEGRABLE_AT_ZERO";
    case errc::hypothesis_fail: return "HYPOTHESIS_FAIL";
    case errc::alpha_singular: return "ALPHA_SINGULAR";
    case errc::sign_fail: return "SIGN_FAIL";
    case errc::nonpositive_f: return "NONPOSITIVE_F";
    case errc::positivity_lost: return "POSITIVITY_LOST";
    case errc::step_underflow: return "STEP_UNDERFLOW";
    case errc::eval_fail: return "EVAL_FAIL";
    case errc::not_monotone: return "NOT_MONOTONE";
    case errc::not_proper: return "NOT_PROPER";
    case errc::config_error: return "CONFIG_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace gnv

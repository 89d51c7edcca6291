#include <doctest.h>

#include "gnv/campaign.hpp"
#include "gnv/config.hpp"

using namespace gnv;

TEST_CASE("named spec parsing") {
  NamedSpec a = parse_named_spec("poly_bump:k=2");
  CHECK(a.name == "poly_bump");
  CHECK(a.params.at("k") == 2.0);

  NamedSpec b = parse_named_spec("unit");
  CHECK(b.name == "unit");
  CHECK(b.params.empty());

  NamedSpec c = parse_named_spec("power:theta=0.5,p=4");
  CHECK(c.params.at("theta") == 0.5);
  CHECK(c.params.at("p") == 4.0);

  CHECK_THROWS_AS(parse_named_spec("power:theta"), Error);
  CHECK_THROWS_AS(parse_named_spec("power:theta=abc"), Error);
}

TEST_CASE("config text parsing") {
  const char* text = R"(
# a small campaign
[tolerances]
rel = 1e-7

[case]
functions = poly_bump:k=2; smooth_bump
weights = unit
p = 2, 3
regime = R3_real_line
expect = holds

[case]
functions = sine_bump
weights = power:theta=0.3
p = 4
regime = R5_RG
window = -2, 2
expect = divergent_lhs

[eig]
f = affine_plus_parabola:a0=1.25,a1=-1,a2=1
tau = power:alpha=1
q = 2
checks = identity, i
)";
  CampaignConfig cfg = parse_config_text(text);
  CHECK(cfg.tol.rel == 1e-7);
  REQUIRE(cfg.cases.size() == 2);
  CHECK(cfg.cases[0].functions.size() == 2);
  CHECK(cfg.cases[0].p_values.size() == 2);
  CHECK(cfg.cases[0].regime == Regime::r3_real_line);
  CHECK(cfg.cases[1].expect == Expectation::divergent_lhs);
  CHECK(cfg.cases[1].window.a == -2.0);
  REQUIRE(cfg.eig.size() == 1);
  CHECK(cfg.eig[0].q == 2.0);
  REQUIRE(cfg.eig[0].checks.size() == 2);

  validate_config(cfg);
}

TEST_CASE("config diagnostics") {
  CHECK_THROWS_AS(parse_config_text("key = 1\n"), Error);          // entry before section
  CHECK_THROWS_AS(parse_config_text("[case\n"), Error);            // malformed header
  CHECK_THROWS_AS(parse_config_text("[nope]\nx = 1\n"), Error);    // unknown section
  CHECK_THROWS_AS(parse_config_text("[case]\nweights = unit\np = 2\nregime = R3_real_line\n"),
                  Error);  // missing functions

  const char* bad_regime = "[case]\nfunctions = poly_bump\nweights = unit\np = 2\nregime = R9\n";
  CHECK_THROWS_AS(parse_config_text(bad_regime), Error);

  const char* bad_weight = "[case]\nfunctions = poly_bump\nweights = wat\np = 2\nregime = R3_real_line\n";
  CampaignConfig cfg = parse_config_text(bad_weight);
  CHECK_THROWS_AS(validate_config(cfg), Error);
  try {
    validate_config(cfg);
  } catch (const Error& e) {
    CHECK(e.code() == errc::config_error);
  }
}

TEST_CASE("tiny verify campaign end to end") {
  const char* text = R"(
[case]
functions = poly_bump:k=2
weights = unit
p = 2
regime = R3_real_line
)";
  CampaignConfig cfg = parse_config_text(text);
  VerifyCampaignResult res = run_verify_campaign(cfg, 1);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].verdict.pass == Pass::holds);
  CHECK(res.rows[0].expectation_met);
  CHECK(res.exit_code == 0);
  CHECK(res.n_holds == 1);

  std::string csv = verify_csv(res);
  CHECK(csv.find("index,function,weight,p,regime") == 0);
  CHECK(csv.find("holds") != std::string::npos);
  CHECK(csv.find("2.438095238095e+00") != std::string::npos);

  std::string json = verify_json(res);
  CHECK(json.find("\"kind\": \"verify_campaign\"") != std::string::npos);

  // determinism: a second run renders byte-identical output
  VerifyCampaignResult res2 = run_verify_campaign(cfg, 2);
  CHECK(verify_csv(res2) == csv);
}

TEST_CASE("ode campaign and negative control exit code") {
  const char* good = R"(
[eig]
f = affine_plus_parabola:a0=1.25,a1=-1,a2=1
tau = power:alpha=1
q = 2
checks = identity, i, holder
)";
  CampaignConfig cfg = parse_config_text(good);
  OdeCampaignResult res = run_ode_campaign(cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].all_pass);
  CHECK(res.exit_code == 0);

  const char* control = R"(
[eig]
f = affine_plus_parabola:a0=1.25,a1=-1,a2=1
tau = power:alpha=1
q = 2
checks = identity
perturb_g = 0.1
)";
  OdeCampaignResult bad = run_ode_campaign(parse_config_text(control));
  // the perturbed pair breaks the identity and the campaign flags it
  REQUIRE(bad.rows.size() == 1);
  REQUIRE(bad.rows[0].checks.size() == 1);
  CHECK(bad.rows[0].checks[0].measured > 1e-2);
  CHECK_FALSE(bad.rows[0].checks[0].pass);
  CHECK(bad.exit_code == 2);
}

TEST_CASE("model block runs the integrator") {
  const char* text = R"(
[eig]
model = thomas_fermi
t0 = 0.1
y0 = 1
yp0 = 0
t1 = 0.5
q = 2
checks = identity
)";
  CampaignConfig cfg = parse_config_text(text);
  validate_config(cfg);
  OdeCampaignResult res = run_ode_campaign(cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].error.empty());
  CHECK_FALSE(res.rows[0].solution.empty());
  std::string csv = solution_csv(res.rows[0]);
  CHECK(csv.find("t,y,yp,ypp") == 0);
}

TEST_CASE("float formatting is fixed width") {
  CHECK(format_double(1.0) == "1.000000000000e+00");
  CHECK(format_double(-0.5) == "-5.000000000000e-01");
  CHECK(format_double(1.0 / 3.0) == "3.333333333333e-01");
}

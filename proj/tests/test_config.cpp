#include <doctest.h>

#include <string>

#include "radhydro/config.hpp"
#include "radhydro/errors.hpp"

using namespace radhydro;

namespace {

std::string field_of(const std::string& text, std::optional<Mode> mode = std::nullopt) {
  try {
    parse_config(text, mode);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("modes round-trip through their names") {
  for (Mode m : {Mode::SimulateEps, Mode::SimulateLimit, Mode::ConvergenceStudy, Mode::ClosureCheck}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
  CHECK_FALSE(parse_mode("simulate").has_value());
}

TEST_CASE("minimal convergence-study config gets every default") {
  const RunConfig c = parse_config(R"({"mode": "convergence-study", "eps_list": [0.1, 0.05, 0.025]})");
  CHECK(c.mode == Mode::ConvergenceStudy);
  CHECK(c.step.cfl_advective == 0.4);
  CHECK(c.step.cfl_diffusive == 0.4);
  CHECK(c.t_end == 0.5);
  CHECK(c.step.t_end == 0.5);
  CHECK(c.n_dims == 1);
  CHECK(c.points_per_dim == 64);
  CHECK(c.sobolev_index == 3);
  CHECK(c.fluid.mu == 0.01);
  CHECK(c.initial.u.size() == 1);
  CHECK(c.initial.shapes.empty());

  const RunConfig two = parse_config(R"({"grid": {"n_dims": 2}, "eps_list": [0.1, 0.05, 0.025]})", Mode::ConvergenceStudy);
  CHECK(two.sobolev_index == 4);
  CHECK(two.initial.u.size() == 2);

  const nlohmann::json echo = to_json(c);
  CHECK(echo["step"]["cfl_advective"] == 0.4);
  CHECK(echo["sobolev_index"] == 3);
  CHECK(echo["mode"] == "convergence-study");
  // The echo is itself a valid config that parses back to the same echo.
  CHECK(to_json(parse_config(echo.dump())) == echo);
}

TEST_CASE("initial profiles are sampled") {
  const RunConfig c = parse_config(R"({
    "mode": "simulate-limit",
    "initial": {"rho": {"mean": 2.0, "terms": [{"amplitude": 0.5, "kind": "cos", "k": [2]}]}}
  })");
  const FluidState f = c.initial.sample(c.grid());
  CHECK(f.rho[0] == doctest::Approx(2.5));
  CHECK(f.rho.mean() == doctest::Approx(2.0));
  CHECK(f.theta.min() == doctest::Approx(0.9).epsilon(1e-3));
}

TEST_CASE("perturbation shape overrides are normalized") {
  const RunConfig c = parse_config(R"({
    "mode": "simulate-eps", "eps": 0.1,
    "initial": {"perturbation_amp": 1.0,
                "perturbation_shapes": {"rho": {"terms": [{"amplitude": 7.0, "kind": "sin", "k": [3]}]}}}
  })");
  const PerturbationShapes d = c.initial.shapes.sample(c.grid());
  CHECK(sobolev_norm(d.rho, 0) == doctest::Approx(1.0));
  CHECK(d.rho[16] == doctest::Approx(-1.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(to_json(c)["initial"]["perturbation_shapes"].contains("rho"));
  CHECK(field_of(R"({"mode": "simulate-eps", "eps": 0.1,
    "initial": {"perturbation_shapes": {"theta": {"mean": 0.0}}}})") == "initial.perturbation_shapes.theta");
}

TEST_CASE("validation names the offending field") {
  CHECK(field_of(R"({"mode": "convergence-study", "eps_list": [0.1, 0.1, 0.05]})") == "eps_list");
  CHECK(field_of(R"({"mode": "convergence-study", "eps_list": [0.1, 0.05]})") == "eps_list");
  CHECK(field_of(R"({"mode": "convergence-study", "eps_list": [0.1, 0.2, 0.05]})") == "eps_list");
  CHECK(field_of(R"({"mode": "convergence-study", "eps_list": [0.1, 0.05, 0.02], "colour": 1})") == "colour");
  CHECK(field_of(R"({"mode": "simulate-limit", "grid": {"points": 64}})") == "grid.points");
  CHECK(field_of(R"({"mode": "simulate-limit", "initial": {"rho": {"terms": [{"amp": 1}]}}})") ==
        "initial.rho.terms[0].amp");
  CHECK(field_of(R"({"mode": "simulate-eps"})") == "eps");
  CHECK(field_of(R"({"mode": "simulate-limit", "grid": {"points_per_dim": 48}})") == "grid.points_per_dim");
  CHECK(field_of(R"({"mode": "simulate-limit", "grid": {"n_dims": 3}})") == "grid.n_dims");
  CHECK(field_of(R"({"mode": "simulate-limit", "fluid": {"mu": -1}})") == "fluid");
  CHECK(field_of(R"({"mode": "simulate-limit", "sobolev_index": 7})") == "sobolev_index");
  CHECK(field_of(R"({"mode": "simulate-limit", "t_end": "long"})") == "t_end");
  CHECK(field_of(R"({"mode": "closure-check", "grid": {"n_dims": 2}, "kinetic": {"ordinates": 5}})") ==
        "kinetic.ordinates");
  CHECK(field_of(R"({"mode": "dance"})") == "mode");
  CHECK(field_of(R"({"eps": 0.1})") == "mode");
  CHECK(field_of(R"({"mode": "simulate-limit"})", Mode::ClosureCheck) == "mode");
  CHECK(field_of(R"({"eps": 0.1})", Mode::SimulateEps) == "");
}

TEST_CASE("malformed JSON reports the line") {
  const std::string text = "{\n  \"mode\": \"simulate-limit\",\n  \"t_end\": 0.5,,\n}\n";
  try {
    parse_config(text);
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ParseError);
}

#include "radhydro/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "radhydro/error_analysis.hpp"
#include "radhydro/errors.hpp"

namespace radhydro {

using nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::SimulateEps: return "simulate-eps";
    case Mode::SimulateLimit: return "simulate-limit";
    case Mode::ConvergenceStudy: return "convergence-study";
    case Mode::ClosureCheck: return "closure-check";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(const std::string& name) {
  for (Mode m : {Mode::SimulateEps, Mode::SimulateLimit, Mode::ConvergenceStudy, Mode::ClosureCheck}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

SpectralField ProfileSpec::sample(const Grid& grid) const {
  return SpectralField::from_function(grid, [&](const std::array<double, 2>& x) {
    double v = mean;
    for (const auto& t : terms) {
      const double phase = t.k[0] * x[0] + (grid.dims() > 1 ? t.k[1] * x[1] : 0.0);
      v += t.amplitude * (t.cosine ? std::cos(phase) : std::sin(phase));
    }
    return v;
  });
}

FluidState InitialSpec::sample(const Grid& grid) const {
  std::vector<SpectralField> comps;
  for (const auto& c : u) comps.push_back(c.sample(grid));
  return {rho.sample(grid), VectorField(std::move(comps)), theta.sample(grid)};
}

namespace {

SpectralField unit_shape(const ProfileSpec& p, const Grid& grid, const std::string& field) {
  const SpectralField f = p.sample(grid);
  const double norm = sobolev_norm(f, 0);
  if (!(norm > 1e-12)) throw ValidationError(field, "perturbation shape has zero norm");
  return f / norm;
}

VectorField unit_shape(const std::vector<ProfileSpec>& p, const Grid& grid, const std::string& field) {
  if (int(p.size()) != grid.dims()) throw ValidationError(field, "needs one profile per dimension");
  std::vector<SpectralField> comps;
  for (const auto& c : p) comps.push_back(c.sample(grid));
  VectorField v(std::move(comps));
  const double norm = sobolev_norm(v, 0);
  if (!(norm > 1e-12)) throw ValidationError(field, "perturbation shape has zero norm");
  return (1.0 / norm) * v;
}

}  // namespace

PerturbationShapes ShapeSpec::sample(const Grid& grid) const {
  PerturbationShapes d = default_perturbation_shapes(grid);
  const std::string base = "initial.perturbation_shapes.";
  if (rho) d.rho = unit_shape(*rho, grid, base + "rho");
  if (u) d.u = unit_shape(*u, grid, base + "u");
  if (theta) d.theta = unit_shape(*theta, grid, base + "theta");
  if (I0) d.I0 = unit_shape(*I0, grid, base + "I0");
  if (I1) d.I1 = unit_shape(*I1, grid, base + "I1");
  return d;
}

InitialSpec default_initial_spec(int n_dims) {
  InitialSpec s;
  s.rho = {1.0, {{0.1, false, {1, 0}}}};
  s.u.push_back({0.0, {{0.1, false, {1, 0}}}});
  if (n_dims == 2) s.u.push_back({0.0, {}});
  s.theta = {1.0, {{0.1, true, {1, 0}}}};
  return s;
}

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ValidationError(field(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ValidationError(field(key), "expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ValidationError(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) throw ValidationError(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::array<double, 2> range(const std::string& key, std::array<double, 2> fallback) {
    if (!has(key)) return fallback;
    const auto v = numbers(key);
    if (v.size() != 2 || !(v[0] <= v[1])) throw ValidationError(field(key), "expected [low, high] with low <= high");
    return {v[0], v[1]};
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ValidationError(field(key), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ProfileSpec read_profile(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ProfileSpec p;
  p.mean = r.number("mean", 0.0);
  if (r.has("terms")) {
    const json& terms = r.at("terms");
    if (!terms.is_array()) throw ValidationError(r.field("terms"), "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tpath = r.field("terms") + "[" + std::to_string(i) + "]";
      ObjectReader t(terms[i], tpath);
      TrigTerm term;
      term.amplitude = t.number("amplitude", 0.0);
      const std::string kind = t.string("kind", "sin");
      if (kind != "sin" && kind != "cos") throw ValidationError(t.field("kind"), "must be \"sin\" or \"cos\"");
      term.cosine = kind == "cos";
      if (t.has("k")) {
        const auto k = t.numbers("k");
        if (k.empty() || k.size() > 2) throw ValidationError(t.field("k"), "expected one or two integers");
        for (std::size_t d = 0; d < k.size(); ++d) {
          if (k[d] != std::floor(k[d])) throw ValidationError(t.field("k"), "wavenumbers must be integers");
          term.k[d] = int(k[d]);
        }
        if (k.size() == 1) term.k[1] = 0;
      }
      t.finish();
      p.terms.push_back(term);
    }
  }
  r.finish();
  return p;
}

std::vector<ProfileSpec> read_profiles(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array of profiles");
  std::vector<ProfileSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_profile(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json profile_json(const ProfileSpec& p) {
  json terms = json::array();
  for (const auto& t : p.terms) {
    terms.push_back({{"amplitude", t.amplitude}, {"kind", t.cosine ? "cos" : "sin"}, {"k", {t.k[0], t.k[1]}}});
  }
  return {{"mean", p.mean}, {"terms", terms}};
}

void validate(const RunConfig& c) {
  if (c.n_dims != 1 && c.n_dims != 2) throw ValidationError("grid.n_dims", "must be 1 or 2");
  if (c.points_per_dim < 8 || (c.points_per_dim & (c.points_per_dim - 1)) != 0) {
    throw ValidationError("grid.points_per_dim", "must be a power of two >= 8");
  }
  try {
    c.fluid.validate(c.n_dims);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("fluid", e.what());
  }
  try {
    c.step.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("step", e.what());
  }
  if (!(c.t_end > 0.0)) throw ValidationError("t_end", "must be positive");
  if (!(c.output_interval > 0.0)) throw ValidationError("output_interval", "must be positive");
  if (c.sobolev_index < 0 || c.sobolev_index > 6) throw ValidationError("sobolev_index", "must lie in [0, 6]");
  if (!(c.initial.perturbation_amp >= 0.0)) throw ValidationError("initial.perturbation_amp", "must be non-negative");
  if (int(c.initial.u.size()) != c.n_dims) throw ValidationError("initial.u", "needs one profile per dimension");
  c.initial.shapes.sample(c.grid());

  if (c.mode == Mode::SimulateEps && !c.eps) throw ValidationError("eps", "required for simulate-eps");
  if (c.eps && !(*c.eps > 0.0)) throw ValidationError("eps", "must be positive");
  if (c.mode == Mode::ConvergenceStudy && c.eps_list.size() < 3) {
    throw ValidationError("eps_list", "convergence-study needs at least three values");
  }
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    if (!(c.eps_list[i] > 0.0)) throw ValidationError("eps_list", "values must be positive");
    if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1])) throw ValidationError("eps_list", "must be strictly decreasing");
  }
  if (c.mode == Mode::ClosureCheck) {
    if (c.n_dims == 2 && (c.kinetic.ordinates < 4 || c.kinetic.ordinates % 2 != 0)) {
      throw ValidationError("kinetic.ordinates", "must be even and >= 4");
    }
    for (const auto& s : c.kinetic.sigma_pairs) {
      if (!(s[0] > 0.0) || !(s[1] >= 0.0)) throw ValidationError("kinetic.sigma", "need sigma_a > 0, sigma_s >= 0");
    }
    if (!(c.kinetic.eps > 0.0)) throw ValidationError("kinetic.eps", "must be positive");
    if (!(c.kinetic.dt > 0.0)) throw ValidationError("kinetic.dt", "must be positive");
    if (!(c.kinetic.t_end >= 0.0)) throw ValidationError("kinetic.t_end", "must be non-negative");
  }
}

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, start = 0;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      start = i + 1;
    }
  }
  std::size_t end = text.find('\n', start);
  if (end == std::string::npos) end = text.size();
  return "line " + std::to_string(line) + ": " + text.substr(start, end - start);
}

}  // namespace

RunConfig parse_config(const std::string& text, std::optional<Mode> mode_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON (") + line_context(text, e.byte == 0 ? 0 : e.byte - 1) +
                     "): " + e.what());
  }

  ObjectReader r(doc, "");
  RunConfig c;

  if (r.has("mode")) {
    const auto m = parse_mode(r.string("mode", ""));
    if (!m) throw ValidationError("mode", "unknown mode");
    if (mode_override && *mode_override != *m) {
      throw ValidationError("mode", "config says " + to_string(*m) + " but the command is " + to_string(*mode_override));
    }
    c.mode = *m;
  } else if (mode_override) {
    c.mode = *mode_override;
  } else {
    throw ValidationError("mode", "missing (give it in the config or as the subcommand)");
  }

  if (r.has("grid")) {
    ObjectReader g(r.at("grid"), "grid");
    c.n_dims = g.integer("n_dims", c.n_dims);
    c.points_per_dim = g.integer("points_per_dim", c.points_per_dim);
    g.finish();
  }
  if (r.has("fluid")) {
    ObjectReader f(r.at("fluid"), "fluid");
    c.fluid.mu = f.number("mu", c.fluid.mu);
    c.fluid.lambda = f.number("lambda", c.fluid.lambda);
    c.fluid.kappa = f.number("kappa", c.fluid.kappa);
    f.finish();
  }
  if (r.has("eps")) c.eps = r.number("eps", 0.0);
  if (r.has("eps_list")) c.eps_list = r.numbers("eps_list");
  c.t_end = r.number("t_end", c.t_end);
  c.output_interval = r.number("output_interval", c.output_interval);

  c.step.dt_max = 2e-3;
  if (r.has("step")) {
    ObjectReader s(r.at("step"), "step");
    c.step.cfl_advective = s.number("cfl_advective", c.step.cfl_advective);
    c.step.cfl_diffusive = s.number("cfl_diffusive", c.step.cfl_diffusive);
    c.step.dt_max = s.number("dt_max", c.step.dt_max);
    s.finish();
  }
  c.step.t_end = c.t_end;

  c.initial = default_initial_spec(c.n_dims);
  if (r.has("initial")) {
    ObjectReader in(r.at("initial"), "initial");
    if (in.has("rho")) c.initial.rho = read_profile(in.at("rho"), "initial.rho");
    if (in.has("theta")) c.initial.theta = read_profile(in.at("theta"), "initial.theta");
    if (in.has("u")) c.initial.u = read_profiles(in.at("u"), "initial.u");
    c.initial.perturbation_amp = in.number("perturbation_amp", 0.0);
    if (in.has("perturbation_shapes")) {
      const std::string path = "initial.perturbation_shapes";
      ObjectReader sh(in.at("perturbation_shapes"), path);
      ShapeSpec& spec = c.initial.shapes;
      if (sh.has("rho")) spec.rho = read_profile(sh.at("rho"), path + ".rho");
      if (sh.has("u")) spec.u = read_profiles(sh.at("u"), path + ".u");
      if (sh.has("theta")) spec.theta = read_profile(sh.at("theta"), path + ".theta");
      if (sh.has("I0")) spec.I0 = read_profile(sh.at("I0"), path + ".I0");
      if (sh.has("I1")) spec.I1 = read_profiles(sh.at("I1"), path + ".I1");
      sh.finish();
    }
    in.finish();
  }

  c.sobolev_index = r.integer("sobolev_index", theorem_sobolev_index(c.n_dims));
  c.output_dir = r.string("output_dir", c.output_dir);
  if (r.has("seed")) {
    const json& s = r.at("seed");
    if (!s.is_number_unsigned()) throw ValidationError("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }

  if (r.has("bounds")) {
    ObjectReader b(r.at("bounds"), "bounds");
    c.bounds.fluid_slope = b.range("fluid_slope", c.bounds.fluid_slope);
    c.bounds.radiation_slope = b.range("radiation_slope", c.bounds.radiation_slope);
    c.bounds.min_r_squared = b.number("min_r_squared", c.bounds.min_r_squared);
    c.bounds.gamma_max = b.number("gamma_max", c.bounds.gamma_max);
    c.bounds.gamma_spread = b.number("gamma_spread", c.bounds.gamma_spread);
    c.bounds.l0_spread = b.number("l0_spread", c.bounds.l0_spread);
    c.bounds.closure_residual = b.number("closure_residual", c.bounds.closure_residual);
    c.bounds.mass_drift = b.number("mass_drift", c.bounds.mass_drift);
    c.bounds.moment_residual = b.number("moment_residual", c.bounds.moment_residual);
    b.finish();
  }

  if (r.has("kinetic")) {
    ObjectReader k(r.at("kinetic"), "kinetic");
    c.kinetic.ordinates = k.integer("ordinates", c.kinetic.ordinates);
    c.kinetic.eps = k.number("eps", c.kinetic.eps);
    c.kinetic.t_end = k.number("t_end", c.kinetic.t_end);
    c.kinetic.dt = k.number("dt", c.kinetic.dt);
    if (k.has("sigma")) {
      const json& s = k.at("sigma");
      if (!s.is_array()) throw ValidationError("kinetic.sigma", "expected an array of [sigma_a, sigma_s] pairs");
      c.kinetic.sigma_pairs.clear();
      for (const auto& pair : s) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
          throw ValidationError("kinetic.sigma", "expected an array of [sigma_a, sigma_s] pairs");
        }
        c.kinetic.sigma_pairs.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
    }
    k.finish();
  }

  r.finish();
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path, std::optional<Mode> mode_override) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), mode_override);
}

json to_json(const RunConfig& c) {
  json u = json::array();
  for (const auto& p : c.initial.u) u.push_back(profile_json(p));
  json sigma = json::array();
  for (const auto& s : c.kinetic.sigma_pairs) sigma.push_back({s[0], s[1]});

  json j = {
      {"mode", to_string(c.mode)},
      {"grid", {{"n_dims", c.n_dims}, {"points_per_dim", c.points_per_dim}}},
      {"fluid", {{"mu", c.fluid.mu}, {"lambda", c.fluid.lambda}, {"kappa", c.fluid.kappa}}},
      {"eps_list", c.eps_list},
      {"t_end", c.t_end},
      {"output_interval", c.output_interval},
      {"step", {{"cfl_advective", c.step.cfl_advective}, {"cfl_diffusive", c.step.cfl_diffusive}, {"dt_max", c.step.dt_max}}},
      {"initial",
       {{"rho", profile_json(c.initial.rho)},
        {"u", u},
        {"theta", profile_json(c.initial.theta)},
        {"perturbation_amp", c.initial.perturbation_amp}}},
      {"sobolev_index", c.sobolev_index},
      {"output_dir", c.output_dir},
      {"seed", c.seed},
      {"bounds",
       {{"fluid_slope", c.bounds.fluid_slope},
        {"radiation_slope", c.bounds.radiation_slope},
        {"min_r_squared", c.bounds.min_r_squared},
        {"gamma_max", c.bounds.gamma_max},
        {"gamma_spread", c.bounds.gamma_spread},
        {"l0_spread", c.bounds.l0_spread},
        {"closure_residual", c.bounds.closure_residual},
        {"mass_drift", c.bounds.mass_drift},
        {"moment_residual", c.bounds.moment_residual}}},
      {"kinetic",
       {{"ordinates", c.kinetic.ordinates},
        {"sigma", sigma},
        {"eps", c.kinetic.eps},
        {"t_end", c.kinetic.t_end},
        {"dt", c.kinetic.dt}}},
  };
  if (c.eps) j["eps"] = *c.eps;
  const ShapeSpec& sh = c.initial.shapes;
  if (!sh.empty()) {
    const auto many = [](const std::vector<ProfileSpec>& v) {
      json a = json::array();
      for (const auto& p : v) a.push_back(profile_json(p));
      return a;
    };
    json shapes = json::object();
    if (sh.rho) shapes["rho"] = profile_json(*sh.rho);
    if (sh.u) shapes["u"] = many(*sh.u);
    if (sh.theta) shapes["theta"] = profile_json(*sh.theta);
    if (sh.I0) shapes["I0"] = profile_json(*sh.I0);
    if (sh.I1) shapes["I1"] = many(*sh.I1);
    j["initial"]["perturbation_shapes"] = shapes;
  }
  return j;
}

}  // namespace radhydro

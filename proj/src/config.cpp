#include "wigner/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "wigner/error.hpp"
#include "wigner/io.hpp"

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace wigner {

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::general: return "general";
    case RunMode::symmetric_shortcut: return "symmetric_shortcut";
    case RunMode::oracle: return "oracle";
    case RunMode::compare: return "compare";
  }
  return "general";
}

namespace {

RunMode parse_mode(const std::string& s) {
  if (s == "general") return RunMode::general;
  if (s == "symmetric_shortcut") return RunMode::symmetric_shortcut;
  if (s == "oracle") return RunMode::oracle;
  if (s == "compare") return RunMode::compare;
  throw ValidationError("run.mode", "unknown mode '" + s + "' (general | symmetric_shortcut | oracle | compare)");
}

UpwindScheme parse_scheme(const std::string& s) {
  if (s == "box") return UpwindScheme::box;
  if (s == "first_order") return UpwindScheme::first_order;
  throw ValidationError("run.oracle_scheme", "unknown scheme '" + s + "' (box | first_order)");
}

const char* scheme_key(UpwindScheme s) { return s == UpwindScheme::box ? "box" : "first_order"; }

double parse_double(const std::string& field, const std::string& text) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(field, "not a number: '" + text + "'");
  }
}

long long parse_int(const std::string& field, const std::string& text) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(field, "not an integer: '" + text + "'");
  }
}

bool parse_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError(field, "not a boolean: '" + text + "'");
}

double maxwellian(const InflowSpec& s, double v) {
  const double t = s.temperature;
  const double d = v - s.drift;
  return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  auto inflow = [](const InflowSpec& s) {
    return nlohmann::json{{"kind", s.kind}, {"temperature", s.temperature}, {"drift", s.drift}, {"file", s.file}};
  };
  return {{"preset", preset},
          {"potential",
           {{"family", family}, {"amplitude", amplitude}, {"width_a", width_a}, {"center", center},
            {"table", table}, {"y_max", y_max}}},
          {"domain", {{"length", length}, {"steps", steps}}},
          {"velocity", {{"half_count", half_count}, {"spacing", spacing}}},
          {"moments", {{"order", moment_order}}},
          {"boundary", {{"left", inflow(left)}, {"right", inflow(right)}}},
          {"run",
           {{"mode", to_string(mode)}, {"seed", seed}, {"output_dir", output_dir},
            {"oracle_scheme", scheme_key(oracle_scheme)}, {"sign_check", sign_check}}},
          {"tolerances",
           {{"inflow", inflow_tolerance}, {"max_condition", max_condition},
            {"bound_slack", bound_slack}, {"bound_trials", bound_trials}}}};
}

std::string RunConfig::to_ini() const {
  std::ostringstream os;
  auto d = [](double x) { return format_double(x); };
  os << "[potential]\nfamily = " << family << "\namplitude = " << d(amplitude) << "\nwidth_a = " << d(width_a)
     << "\ncenter = " << d(center) << "\n";
  if (!table.empty()) os << "table = " << table << "\n";
  os << "y_max = " << d(y_max) << "\n\n";
  os << "[domain]\nlength = " << d(length) << "\nsteps = " << steps << "\n\n";
  os << "[velocity]\nhalf_count = " << half_count << "\nspacing = " << d(spacing) << "\n\n";
  os << "[moments]\norder = " << moment_order << "\n\n";
  os << "[boundary]\n";
  for (const auto& [side, s] : {std::pair{"left", &left}, std::pair{"right", &right}}) {
    os << side << " = " << s->kind << "\n"
       << side << "_temperature = " << d(s->temperature) << "\n"
       << side << "_drift = " << d(s->drift) << "\n";
    if (!s->file.empty()) os << side << "_file = " << s->file << "\n";
  }
  os << "\n[run]\nmode = " << to_string(mode) << "\nseed = " << seed << "\noutput_dir = " << output_dir
     << "\noracle_scheme = " << scheme_key(oracle_scheme) << "\nsign_check = " << (sign_check ? "true" : "false")
     << "\n\n";
  os << "[tolerances]\ninflow = " << d(inflow_tolerance) << "\nmax_condition = " << d(max_condition)
     << "\nbound_slack = " << d(bound_slack) << "\nbound_trials = " << bound_trials << "\n";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> list_presets() {
  return {{"free-stream", "zero potential, full Maxwellian inflow from both sides"},
          {"gaussian-barrier", "gaussian barrier A=1, a=1 on l=10; Maxwellian inflow from the left only"},
          {"shifted-barrier", "gaussian barrier centred at x=1.3 (asymmetric); sign-convention check enabled"}};
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "gaussian-barrier") return c;
  if (name == "free-stream") {
    c.family = "zero";
    c.right = InflowSpec{};
    return c;
  }
  if (name == "shifted-barrier") {
    c.center = 1.3;
    c.sign_check = true;
    return c;
  }
  throw ValidationError("run.preset", "unknown preset '" + name + "'");
}

RunConfig load_config(const std::string& path) {
  if (!fs::exists(path)) throw ValidationError("config", "file not found: " + path);
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config", e.what());
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).lexically_normal().string();
  };

  RunConfig c;
  if (auto p = tree.get_optional<std::string>("run.preset")) c = preset_config(*p);

  static const std::set<std::string> known = {
      "potential.family", "potential.amplitude", "potential.width_a", "potential.center",
      "potential.table", "potential.y_max", "domain.length", "domain.steps",
      "velocity.half_count", "velocity.spacing", "moments.order", "boundary.left",
      "boundary.left_temperature", "boundary.left_drift", "boundary.left_file", "boundary.right",
      "boundary.right_temperature", "boundary.right_drift", "boundary.right_file", "run.preset",
      "run.mode", "run.seed", "run.output_dir", "run.oracle_scheme", "run.sign_check",
      "tolerances.inflow", "tolerances.max_condition", "tolerances.bound_slack",
      "tolerances.bound_trials"};
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ValidationError(section, "key outside a section");
    for (const auto& [key, value] : body) {
      const std::string field = section + "." + key;
      if (!known.count(field)) throw ValidationError(field, "unknown key");
      const std::string v = value.get_value<std::string>();
      if (field == "potential.family") c.family = v;
      else if (field == "potential.amplitude") c.amplitude = parse_double(field, v);
      else if (field == "potential.width_a") c.width_a = parse_double(field, v);
      else if (field == "potential.center") c.center = parse_double(field, v);
      else if (field == "potential.table") c.table = resolve(v);
      else if (field == "potential.y_max") c.y_max = parse_double(field, v);
      else if (field == "domain.length") c.length = parse_double(field, v);
      else if (field == "domain.steps") c.steps = static_cast<int>(parse_int(field, v));
      else if (field == "velocity.half_count") c.half_count = static_cast<int>(parse_int(field, v));
      else if (field == "velocity.spacing") c.spacing = parse_double(field, v);
      else if (field == "moments.order") c.moment_order = static_cast<int>(parse_int(field, v));
      else if (field == "boundary.left") c.left.kind = v;
      else if (field == "boundary.left_temperature") c.left.temperature = parse_double(field, v);
      else if (field == "boundary.left_drift") c.left.drift = parse_double(field, v);
      else if (field == "boundary.left_file") c.left.file = resolve(v);
      else if (field == "boundary.right") c.right.kind = v;
      else if (field == "boundary.right_temperature") c.right.temperature = parse_double(field, v);
      else if (field == "boundary.right_drift") c.right.drift = parse_double(field, v);
      else if (field == "boundary.right_file") c.right.file = resolve(v);
      else if (field == "run.mode") c.mode = parse_mode(v);
      else if (field == "run.seed") {
        const long long s = parse_int(field, v);
        if (s < 0) throw ValidationError(field, "must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
      } else if (field == "run.output_dir") c.output_dir = v;
      else if (field == "run.oracle_scheme") c.oracle_scheme = parse_scheme(v);
      else if (field == "run.sign_check") c.sign_check = parse_bool(field, v);
      else if (field == "tolerances.inflow") c.inflow_tolerance = parse_double(field, v);
      else if (field == "tolerances.max_condition") c.max_condition = parse_double(field, v);
      else if (field == "tolerances.bound_slack") c.bound_slack = parse_double(field, v);
      else if (field == "tolerances.bound_trials") c.bound_trials = static_cast<int>(parse_int(field, v));
    }
  }
  return c;
}

std::vector<std::string> validate_config(const RunConfig& c) {
  auto positive = [](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be a positive finite number");
  };
  auto positive_int = [](const char* field, long long v) {
    if (v <= 0) throw ValidationError(field, "must be a positive integer");
  };
  if (c.family != "zero" && c.family != "gaussian" && c.family != "tabulated")
    throw ValidationError("potential.family", "unknown family '" + c.family + "' (zero | gaussian | tabulated)");
  if (!std::isfinite(c.amplitude)) throw ValidationError("potential.amplitude", "must be finite");
  if (!std::isfinite(c.center)) throw ValidationError("potential.center", "must be finite");
  if (c.family == "gaussian") positive("potential.width_a", c.width_a);
  if (c.family == "tabulated") {
    positive("potential.y_max", c.y_max);
    if (c.table.empty()) throw ValidationError("potential.table", "required for the tabulated family");
    if (!fs::exists(c.table)) throw ValidationError("potential.table", "file not found: " + c.table);
  }
  positive("domain.length", c.length);
  positive_int("domain.steps", c.steps);
  positive_int("velocity.half_count", c.half_count);
  positive("velocity.spacing", c.spacing);
  positive_int("moments.order", c.moment_order);
  for (const auto& [name, s] : {std::pair{"boundary.left", &c.left}, std::pair{"boundary.right", &c.right}}) {
    const std::string n(name);
    if (s->kind == "maxwellian") {
      positive((n + "_temperature").c_str(), s->temperature);
      if (!std::isfinite(s->drift)) throw ValidationError(n + "_drift", "must be finite");
    } else if (s->kind == "file") {
      if (s->file.empty()) throw ValidationError(n + "_file", "required when " + n + " = file");
      if (!fs::exists(s->file)) throw ValidationError(n + "_file", "file not found: " + s->file);
    } else if (s->kind != "zero") {
      throw ValidationError(n, "unknown inflow kind '" + s->kind + "' (maxwellian | zero | file)");
    }
  }
  positive("tolerances.inflow", c.inflow_tolerance);
  positive("tolerances.max_condition", c.max_condition);
  positive("tolerances.bound_slack", c.bound_slack);
  positive_int("tolerances.bound_trials", c.bound_trials);
  if (c.mode == RunMode::symmetric_shortcut && c.family == "gaussian" && c.center != 0.0)
    throw ValidationError("run.mode", "symmetric_shortcut needs an even potential (potential.center = 0)");

  std::vector<std::string> warnings;
  const double vmax = (c.half_count - 0.5) * c.spacing;
  for (const auto& [name, s] : {std::pair{"left", &c.left}, std::pair{"right", &c.right}}) {
    if (s->kind != "maxwellian") continue;
    const double tail = std::abs(vmax) - std::abs(s->drift);
    if (tail <= 0.0 || std::exp(-tail * tail / (2.0 * s->temperature)) > 1e-10) {
      std::ostringstream os;
      os << "velocity window v_max=" << vmax << " truncates the " << name << " Maxwellian (tail above 1e-10)";
      warnings.push_back(os.str());
    }
  }
  if (c.family == "gaussian" && std::exp(-c.width_a * vmax * vmax) > 1e-10) {
    std::ostringstream os;
    os << "velocity window v_max=" << vmax << " truncates the kernel Vw (decay exp(-a v^2) above 1e-10)";
    warnings.push_back(os.str());
  }
  if (c.family == "tabulated" && c.moment_order > 3)
    warnings.push_back("tabulated potentials provide V''' at most; moment hierarchy limited to N = 3");
  return warnings;
}

PotentialSpec make_potential(const RunConfig& c) {
  if (c.family == "zero") return PotentialSpec::zero();
  if (c.family == "gaussian") return PotentialSpec::gaussian(c.amplitude, c.width_a, c.center);
  try {
    return load_tabulated_potential(c.table, c.amplitude, c.y_max);
  } catch (const Error& e) {
    throw ValidationError("potential.table", e.what());
  }
}

VelocityGrid make_velocity_grid(const RunConfig& c) { return VelocityGrid{c.half_count, c.spacing}; }

SpaceGrid make_space_grid(const RunConfig& c) { return SpaceGrid{c.length, c.steps}; }

BoundaryData make_boundary(const RunConfig& c, const VelocityGrid& g) {
  BoundaryData bd{g, {}, {}};
  auto side = [&](const InflowSpec& s, Side which, const char* field) {
    const int k = g.half_count;
    std::vector<double> out(static_cast<size_t>(k), 0.0);
    if (s.kind == "maxwellian") {
      for (int j = 0; j < k; ++j) {
        const int idx = which == Side::plus ? k + j : j;
        out[static_cast<size_t>(j)] = maxwellian(s, g.node(idx));
      }
    } else if (s.kind == "file") {
      try {
        out = inflow_restrict(read_grid_function_csv(s.file, g), which);
      } catch (const Error& e) {
        throw ValidationError(field, e.what());
      }
    }
    return out;
  };
  bd.f_L = side(c.left, Side::plus, "boundary.left_file");
  bd.f_R = side(c.right, Side::minus, "boundary.right_file");
  return bd;
}

bool analytic_inflow(const RunConfig& c) { return c.left.kind != "file" && c.right.kind != "file"; }

}  // namespace wigner

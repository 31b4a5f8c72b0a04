#include "tclab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <toml.hpp>
#include <variant>

namespace tclab {
namespace {

using EC = ExperimentConfig;
using Member = std::variant<double EC::*, int EC::*, std::int64_t EC::*, std::string EC::*,
                            std::vector<double> EC::*, std::vector<int> EC::*>;

struct FieldDesc {
  std::string_view section;  // empty: top level
  std::string_view key;
  Member member;
};

const std::vector<FieldDesc>& fields() {
  static const std::vector<FieldDesc> all = {
      {"", "experiment", &EC::experiment},
      {"", "out", &EC::out},
      {"", "seed", &EC::seed},
      {"", "jobs", &EC::jobs},
      {"params", "operator", &EC::op},
      {"params", "nu", &EC::nu},
      {"params", "k", &EC::k},
      {"params", "B", &EC::B},
      {"params", "q", &EC::q},
      {"params", "lambda", &EC::lambda},
      {"params", "theta", &EC::theta},
      {"params", "n_max", &EC::n_max},
      {"params", "trials", &EC::trials},
      {"params", "n_scan", &EC::n_scan},
      {"params", "panels", &EC::panels},
      {"grid", "r_min", &EC::r_min},
      {"grid", "r_max", &EC::r_max},
      {"grid", "n_interior", &EC::n_interior},
      {"grid", "points_per_unit", &EC::points_per_unit},
      {"time", "dt", &EC::dt},
      {"time", "t_end", &EC::t_end},
      {"data", "bump_center", &EC::bump_center},
      {"data", "bump_half_width", &EC::bump_half_width},
      {"data", "forcing_until", &EC::forcing_until},
      {"weights", "w_in", &EC::w_in},
      {"weights", "w_out", &EC::w_out},
      {"weights", "a1", &EC::a1},
      {"weights", "a2", &EC::a2},
      {"weights", "phi", &EC::phi},
      {"counterexample", "delta", &EC::delta},
      {"counterexample", "local_nodes", &EC::local_nodes},
      {"counterexample", "local_dt", &EC::local_dt},
      {"counterexample", "domain", &EC::domain},
      {"counterexample", "length", &EC::length},
      {"counterexample", "v1", &EC::v1},
      {"counterexample", "v2", &EC::v2},
      {"counterexample", "x0", &EC::x0},
      {"counterexample", "quad_nodes", &EC::quad_nodes},
      {"analysis", "j_max", &EC::j_max},
      {"analysis", "samples", &EC::samples},
      {"analysis", "r0", &EC::r0},
      {"analysis", "delta_tilde", &EC::delta_tilde},
      {"convergence", "target", &EC::target},
  };
  return all;
}

std::string field_name(const FieldDesc& f) {
  return f.section.empty() ? std::string(f.key)
                           : std::string(f.section) + "." + std::string(f.key);
}

double read_double(const toml::node& n, const std::string& name) {
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_integer()) return static_cast<double>(v->get());
  throw ConfigError(name, "expected a number");
}

std::int64_t read_int(const toml::node& n, const std::string& name) {
  if (auto v = n.as_integer()) return v->get();
  throw ConfigError(name, "expected an integer");
}

int read_int32(const toml::node& n, const std::string& name) {
  const auto v = read_int(n, name);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(name, "integer out of range");
  }
  return static_cast<int>(v);
}

const toml::array& read_array(const toml::node& n, const std::string& name) {
  if (auto a = n.as_array()) return *a;
  throw ConfigError(name, "expected an array");
}

void assign(EC& c, const FieldDesc& f, const toml::node& n) {
  const std::string name = field_name(f);
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(c.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          c.*member = read_double(n, name);
        } else if constexpr (std::is_same_v<T, int>) {
          c.*member = read_int32(n, name);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          c.*member = read_int(n, name);
        } else if constexpr (std::is_same_v<T, std::string>) {
          auto s = n.as_string();
          if (!s) throw ConfigError(name, "expected a string");
          c.*member = s->get();
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          T out;
          for (const auto& e : read_array(n, name)) out.push_back(read_double(e, name));
          c.*member = std::move(out);
        } else {
          T out;
          for (const auto& e : read_array(n, name)) out.push_back(read_int32(e, name));
          c.*member = std::move(out);
        }
      },
      f.member);
}

void emit_field(toml::table& t, const EC& c, const FieldDesc& f) {
  const std::string key(f.key);
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(c.*member)>;
        const auto& v = c.*member;
        if constexpr (std::is_same_v<T, double> || std::is_same_v<T, std::string>) {
          t.insert_or_assign(key, v);
        } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::int64_t>) {
          t.insert_or_assign(key, static_cast<std::int64_t>(v));
        } else {
          toml::array a;
          for (auto e : v) {
            if constexpr (std::is_same_v<T, std::vector<int>>) {
              a.push_back(static_cast<std::int64_t>(e));
            } else {
              a.push_back(e);
            }
          }
          t.insert_or_assign(key, std::move(a));
        }
      },
      f.member);
}

template <class T>
void require_nonempty(const std::vector<T>& v, const char* name) {
  if (v.empty()) throw ConfigError(name, "list must be nonempty");
}

void require(bool ok, const char* name, const std::string& message) {
  if (!ok) throw ConfigError(name, message);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "pseudo-bound", "resolvent-audit", "sharpness",        "evolve",
      "thm1-weights", "decomposition",   "gp-check",         "dyadic-check",
      "hardy",        "counterexample-tc", "counterexample-heat", "convergence"};
  return names;
}

ExperimentConfig default_config(const std::string& experiment) {
  EC c;
  c.experiment = experiment;
  if (experiment == "evolve" || experiment == "convergence") {
    c.r_max = 4.0;
    c.n_interior = 2999;
  } else if (experiment == "pseudo-bound") {
    c.r_max = 4.0;
    c.points_per_unit = 1000.0;
  } else if (experiment == "resolvent-audit") {
    c.nu = {1e-3, 1e-4, 1e-5, 1e-6};
  } else if (experiment == "sharpness") {
    c.op = "both";
    c.nu = {1e-4, 1e-6, 1e-8};
  } else if (experiment == "thm1-weights") {
    c.nu = {1e-5, 1e-6, 1e-7};
    c.r_max = 4.0;
    c.n_interior = 2999;
  } else if (experiment == "decomposition") {
    c.nu = {1e-4, 1e-5, 1e-6};
    c.r_max = 4.0;
    c.n_interior = 2999;
  } else if (experiment == "gp-check") {
    c.op = "couette";
    c.nu = {1e-3, 1e-2};
    c.k = {1, 2};
    c.B = {0.0};
    c.r_min = 0.0;
    c.r_max = 1.0;
    c.n_interior = 1023;
    c.bump_center = 0.5;
    c.bump_half_width = 0.25;
  } else if (experiment == "hardy") {
    c.nu = {1e-4};
    c.trials = 100;
    c.r_max = 40.0;
    c.n_interior = 8191;
  } else if (experiment == "counterexample-tc") {
    c.nu = {1e-2};
  } else if (experiment == "counterexample-heat") {
    c.nu = {1.0};
    c.n_max = 8;
    c.a1 = "1";
    c.a2 = "1";
    c.phi = "x";
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text, std::string_view requested) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line;
    throw ConfigError("<toml>", os.str());
  }

  std::string experiment = requested.empty() ? "evolve" : std::string(requested);
  if (auto n = root.get("experiment")) {
    auto s = n->as_string();
    if (!s) throw ConfigError("experiment", "expected a string");
    if (!requested.empty() && s->get() != requested) {
      throw ConfigError("experiment", "config names '" + s->get() + "' but '" +
                                          std::string(requested) + "' was requested");
    }
    experiment = s->get();
  }
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
  }
  EC c = default_config(experiment);

  std::set<std::string> known_sections;
  for (const auto& f : fields()) known_sections.insert(std::string(f.section));

  for (const auto& [key, node] : root) {
    const std::string k(key.str());
    if (node.is_table()) {
      if (!known_sections.contains(k)) throw ConfigError(k, "unknown section");
      for (const auto& [sub, sub_node] : *node.as_table()) {
        const std::string s(sub.str());
        auto it = std::find_if(fields().begin(), fields().end(), [&](const FieldDesc& f) {
          return f.section == k && f.key == s;
        });
        if (it == fields().end()) throw ConfigError(k + "." + s, "unknown key");
        assign(c, *it, sub_node);
      }
      continue;
    }
    auto it = std::find_if(fields().begin(), fields().end(), [&](const FieldDesc& f) {
      return f.section.empty() && f.key == k;
    });
    if (it == fields().end()) throw ConfigError(k, "unknown key");
    assign(c, *it, node);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::string_view experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), experiment);
}

std::string emit_config(const ExperimentConfig& c) {
  toml::table root;
  for (const auto& f : fields()) {
    if (f.section.empty()) {
      emit_field(root, c, f);
      continue;
    }
    const std::string sec(f.section);
    if (!root.contains(sec)) root.insert(sec, toml::table{});
    emit_field(*root[sec].as_table(), c, f);
  }
  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  require(std::find(names.begin(), names.end(), c.experiment) != names.end(), "experiment",
          "unknown experiment '" + c.experiment + "'");
  require(!c.out.empty(), "out", "output directory must be nonempty");
  require(c.seed >= 0, "seed", "must be nonnegative");
  require(c.jobs >= 1, "jobs", "must be at least 1");

  require(c.op == "tc" || c.op == "couette" || c.op == "both", "params.operator",
          "expected tc, couette or both");
  require(c.op != "both" || c.experiment == "sharpness", "params.operator",
          "'both' is only meaningful for sharpness");
  require_nonempty(c.nu, "params.nu");
  for (double v : c.nu) require(finite_positive(v), "params.nu", "entries must be positive");
  require_nonempty(c.k, "params.k");
  for (int v : c.k) require(v != 0, "params.k", "entries must be nonzero");
  require_nonempty(c.B, "params.B");
  for (double v : c.B) require(std::isfinite(v), "params.B", "entries must be finite");
  if (c.op == "tc") {
    for (double v : c.B) require(v != 0.0, "params.B", "TC runs need B != 0");
  }
  require_nonempty(c.q, "params.q");
  for (int v : c.q) require(v >= 0 && v <= 8, "params.q", "entries must lie in [0, 8]");
  require_nonempty(c.lambda, "params.lambda");
  for (double v : c.lambda) require(std::isfinite(v), "params.lambda", "entries must be finite");
  require(std::isfinite(c.theta) && c.theta >= 0.0, "params.theta", "must be nonnegative");
  require(c.n_max >= 1 && c.n_max <= 64, "params.n_max", "must lie in [1, 64]");
  require(c.trials >= 1, "params.trials", "must be at least 1");
  require(c.n_scan >= 3, "params.n_scan", "must be at least 3");
  require(c.j_max >= 4 && c.j_max <= 40, "analysis.j_max", "must lie in [4, 40]");
  require(c.samples >= 10000, "analysis.samples", "must be at least 10000");
  require(c.r0 > 1.0 && std::isfinite(c.r0), "analysis.r0", "must exceed 1");
  require_nonempty(c.delta_tilde, "analysis.delta_tilde");
  for (double v : c.delta_tilde) {
    require(v > 0.0 && v <= 0.5, "analysis.delta_tilde", "entries must lie in (0, 0.5]");
  }
  require(c.panels >= 8 && c.panels % 2 == 0, "params.panels", "must be even and >= 8");

  require(std::isfinite(c.r_min) && std::isfinite(c.r_max) && c.r_min < c.r_max, "grid.r_max",
          "must exceed grid.r_min");
  if (c.op == "tc") require(c.r_min > 0.0, "grid.r_min", "TC grids need r_min > 0");
  require(c.n_interior == 0 || (c.n_interior >= 8 && c.n_interior <= 1 << 20),
          "grid.n_interior", "must be 0 (derived) or in [8, 2^20]");
  require(finite_positive(c.points_per_unit), "grid.points_per_unit", "must be positive");
  if (c.n_interior == 0) {
    const double n = c.points_per_unit * (c.r_max - c.r_min);
    require(n >= 8.0 && n <= double(1 << 20), "grid.points_per_unit",
            "derived node count must lie in [8, 2^20]");
  }

  require(std::isfinite(c.dt) && c.dt >= 0.0, "time.dt", "must be nonnegative (0: default)");
  require(std::isfinite(c.t_end) && c.t_end >= 0.0, "time.t_end",
          "must be nonnegative (0: default)");
  require(c.dt == 0.0 || c.t_end == 0.0 || c.dt <= c.t_end, "time.dt", "must not exceed t_end");

  require(finite_positive(c.bump_half_width), "data.bump_half_width", "must be positive");
  require(std::isfinite(c.bump_center), "data.bump_center", "must be finite");
  require(std::isfinite(c.forcing_until) && c.forcing_until >= 0.0, "data.forcing_until",
          "must be nonnegative");

  auto check_weight = [](const std::string& text, const char* name) {
    try {
      (void)WeightSpec::parse(text);
    } catch (const InvalidArgument& e) {
      throw ConfigError(name, e.what());
    }
  };
  check_weight(c.w_in, "weights.w_in");
  check_weight(c.w_out, "weights.w_out");
  auto check_profile = [](const std::string& text, const char* name) {
    try {
      (void)parse_profile(text, 1.0);
    } catch (const InvalidArgument& e) {
      throw ConfigError(name, e.what());
    }
  };
  check_profile(c.a1, "weights.a1");
  check_profile(c.a2, "weights.a2");
  check_profile(c.phi, "weights.phi");

  require(c.delta > 0.0 && c.delta <= 0.5, "counterexample.delta", "must lie in (0, 0.5]");
  require(c.local_nodes >= 64, "counterexample.local_nodes", "must be at least 64");
  require(finite_positive(c.local_dt), "counterexample.local_dt", "must be positive");
  try {
    (void)parse_heat_domain(c.domain);
  } catch (const InvalidArgument& e) {
    throw ConfigError("counterexample.domain", e.what());
  }
  require(finite_positive(c.length), "counterexample.length", "must be positive");
  require(c.v1.size() == 2 && c.v1[0] < c.v1[1], "counterexample.v1",
          "expected [lo, hi] with lo < hi");
  require(c.v2.size() == 2 && c.v2[0] < c.v2[1], "counterexample.v2",
          "expected [lo, hi] with lo < hi");
  require(c.x0 > c.v2[0] && c.x0 < c.v2[1], "counterexample.x0", "must lie inside v2");
  require(c.quad_nodes >= 5 && c.quad_nodes % 2 == 1, "counterexample.quad_nodes",
          "must be odd and >= 5");

  require(c.target == "evolve" || c.target == "pseudo-bound" || c.target == "sharpness",
          "convergence.target", "expected evolve, pseudo-bound or sharpness");
}

RadialProfile parse_profile(const std::string& text, double kappa) {
  if (text.empty()) throw InvalidArgument("empty profile");
  double scale = 1.0;
  double power = 0.0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t star = std::min(text.find('*', pos), text.size());
    const std::string factor = text.substr(pos, star - pos);
    if (factor == "kappa") {
      scale *= kappa;
    } else if (factor == "r" || factor == "x") {
      power += 1.0;
    } else if (factor.rfind("r^", 0) == 0 || factor.rfind("x^", 0) == 0) {
      const std::string num = factor.substr(2);
      std::size_t used = 0;
      double p = 0.0;
      try {
        p = std::stod(num, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != num.size() || !std::isfinite(p)) {
        throw InvalidArgument("bad exponent in profile '" + text + "'");
      }
      power += p;
    } else {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(factor, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != factor.size() || !std::isfinite(v)) {
        throw InvalidArgument("unrecognized factor '" + factor + "' in profile '" + text +
                              "' (expected a number, kappa, r, x, r^p or x^p)");
      }
      scale *= v;
    }
    pos = star + 1;
  }
  if (power == 0.0) return [scale](double) { return scale; };
  if (power == 1.0) return [scale](double r) { return scale * r; };
  return [scale, power](double r) { return scale * std::pow(r, power); };
}

}  // namespace tclab

#pragma once

// Run configuration: flat `key = value` lines with one nesting level for the
// model block. Model keys are written either with a `model.` prefix or inside
// a `[model]` section. `#` starts a comment.
//
//   seed = 7
//   delta_e = 0.3
//   model = xxz            # xxz | custom
//   [model]
//   N = 2
//   Jz = 0.5
//   gamma = 1
//   jump = lowering        # lowering | dephasing
//
// Custom models give the Hamiltonian and any number of jumps in PauliSum
// notation; each jump line is `<rate> : <sum>`:
//
//   model = custom
//   model.N = 1
//   model.H = (0.5,0) Z
//   model.jump = 1 : (0.5,0) X + (0,-0.5) Y

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgap/errors.hpp"
#include "lgap/liouvillian.hpp"
#include "lgap/solver.hpp"

namespace lgap {

struct ModelConfig {
  std::string kind;  // "xxz" or "custom"
  std::optional<int> n;
  double jz = 1.0;
  double gamma = 1.0;
  JumpKind jump = JumpKind::lowering;
  std::string hamiltonian;                                // custom only
  std::vector<std::pair<double, std::string>> custom_jumps;  // custom only
};

struct RunConfig {
  std::optional<ModelConfig> model;
  OptimizerOptions optimizer;
  std::optional<double> delta_e;
  DeltaEOptions delta_e_options;
  int max_offsets = 20;
  int workers = 0;  // 0 = hardware concurrency
  std::string out = "out";
  std::string sweep_axis;
  std::vector<double> sweep_values;
};

/// Shortest round-trippable-enough text for CSV and config echoes.
inline std::string format_number(double v) {
  if (v == 0) v = 0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(std::string_view(v).substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw config_error("line " + std::to_string(line) + ": field '" + key + "': expected a number, got '" +
                         v + "'",
                     line, key);
}

inline long long parse_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (trim(std::string_view(v).substr(used)).empty()) return i;
  } catch (const std::exception&) {
  }
  throw config_error("line " + std::to_string(line) + ": field '" + key + "': expected an integer, got '" +
                         v + "'",
                     line, key);
}

[[noreturn]] inline void bad_value(const std::string& v, int line, const std::string& key,
                                   const std::string& allowed) {
  throw config_error("line " + std::to_string(line) + ": field '" + key + "': '" + v +
                         "' is not one of " + allowed,
                     line, key);
}

inline ModelConfig& model_of(RunConfig& c) {
  if (!c.model) c.model.emplace();
  return *c.model;
}

}  // namespace detail

/// Applies one `key = value` assignment. `line` is used in diagnostics
/// (0 for command-line overrides).
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value, int line = 0) {
  using namespace detail;
  auto& o = c.optimizer;
  auto num = [&] { return parse_double(value, line, key); };
  auto integer = [&] { return parse_int(value, line, key); };

  if (key == "model") {
    if (value != "xxz" && value != "custom") bad_value(value, line, key, "{xxz, custom}");
    model_of(c).kind = value;
  } else if (key == "model.N") {
    model_of(c).n = static_cast<int>(integer());
  } else if (key == "model.Jz") {
    model_of(c).jz = num();
  } else if (key == "model.gamma") {
    model_of(c).gamma = num();
  } else if (key == "model.H") {
    model_of(c).hamiltonian = value;
  } else if (key == "model.jump") {
    ModelConfig& m = model_of(c);
    if (value == "lowering") {
      m.jump = JumpKind::lowering;
    } else if (value == "dephasing") {
      m.jump = JumpKind::dephasing;
    } else {
      const auto colon = value.find(':');
      if (colon == std::string::npos)
        bad_value(value, line, key, "{lowering, dephasing, '<rate> : <pauli sum>'}");
      m.custom_jumps.emplace_back(parse_double(trim(value.substr(0, colon)), line, key),
                                  trim(value.substr(colon + 1)));
    }
  } else if (key == "seed") {
    o.seed = static_cast<std::uint64_t>(integer());
  } else if (key == "blocks") {
    o.block_count = static_cast<int>(integer());
  } else if (key == "kappa") {
    o.kappa = num();
  } else if (key == "delta_e") {
    c.delta_e = num();
  } else if (key == "delta_e_safety") {
    c.delta_e_options.safety = num();
  } else if (key == "delta_e_register") {
    if (value == "vectorized") c.delta_e_options.exponent = DeltaERegister::vectorized;
    else if (value == "physical") c.delta_e_options.exponent = DeltaERegister::physical;
    else bad_value(value, line, key, "{vectorized, physical}");
  } else if (key == "max_offsets") {
    c.max_offsets = static_cast<int>(integer());
  } else if (key == "max_iterations") {
    o.max_iterations = static_cast<int>(integer());
  } else if (key == "grad_tol") {
    o.grad_tol = num();
  } else if (key == "cost_tol") {
    o.cost_tol = num();
  } else if (key == "fd_step") {
    o.fd_step = num();
  } else if (key == "theta_init_scale") {
    o.theta_init_scale = num();
  } else if (key == "gradient") {
    if (value == "finite_difference") o.gradient = GradientMethod::finite_difference;
    else if (value == "adjoint") o.gradient = GradientMethod::adjoint;
    else bad_value(value, line, key, "{finite_difference, adjoint}");
  } else if (key == "pretrain_starts") {
    o.pretrain_starts = static_cast<int>(integer());
  } else if (key == "max_restarts") {
    o.max_restarts = static_cast<int>(integer());
  } else if (key == "success_cost") {
    o.success_cost = num();
  } else if (key == "nonzero_threshold") {
    o.nonzero_threshold = num();
  } else if (key == "workers") {
    c.workers = static_cast<int>(integer());
  } else if (key == "out") {
    c.out = value;
  } else if (key == "sweep.axis") {
    if (value != "gamma" && value != "N") bad_value(value, line, key, "{gamma, N}");
    c.sweep_axis = value;
  } else if (key == "sweep.values") {
    c.sweep_values.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) c.sweep_values.push_back(parse_double(item, line, key));
    }
  } else {
    throw config_error("line " + std::to_string(line) + ": unknown field '" + key + "'", line, key);
  }
}

inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(line_no) + ": unterminated section header",
                           line_no, line);
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (!section.empty() && section != "model")
        throw config_error("line " + std::to_string(line_no) + ": unknown section '" + section + "'",
                           line_no, section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'", line_no, line);
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(line_no) + ": empty key", line_no, key);
    if (section == "model" && key != "model" && key.rfind("model.", 0) != 0) key = "model." + key;
    apply_setting(c, key, value, line_no);
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file '" + path + "'", 0, "config");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Checks required fields and ranges; throws config_error naming the field.
inline void validate(const RunConfig& c) {
  if (!c.model || c.model->kind.empty())
    throw config_error("missing required field 'model' (xxz | custom)", 0, "model");
  const ModelConfig& m = *c.model;
  if (!m.n) throw config_error("missing required field 'model.N'", 0, "model.N");
  if (*m.n < 1) throw config_error("field 'model.N' must be >= 1", 0, "model.N");
  if (m.kind == "xxz" && !(m.gamma >= 0))
    throw config_error("field 'model.gamma' must be >= 0", 0, "model.gamma");
  if (m.kind == "xxz" && !m.custom_jumps.empty())
    throw config_error("field 'model.jump': xxz models take lowering | dephasing", 0, "model.jump");
  if (m.kind == "custom" && *m.n > 4)
    throw config_error("field 'model.N': custom models are limited to N <= 4", 0, "model.N");
  if (c.delta_e && !(*c.delta_e > 0)) throw config_error("field 'delta_e' must be > 0", 0, "delta_e");
  if (c.max_offsets < 1) throw config_error("field 'max_offsets' must be >= 1", 0, "max_offsets");
  if (c.workers < 0) throw config_error("field 'workers' must be >= 0", 0, "workers");
  try {
    validate(c.optimizer);
  } catch (const domain_error& e) {
    throw config_error(e.what(), 0, "optimizer");
  }
}

inline LindbladModel build_model(const ModelConfig& m) {
  const int n = m.n.value_or(0);
  if (m.kind == "xxz") return build_xxz_model(n, m.jz, m.gamma, m.jump);
  PauliSum h = parse_pauli_sum(m.hamiltonian, n);
  std::vector<JumpOperator> jumps;
  for (const auto& [rate, text] : m.custom_jumps) jumps.push_back({rate, parse_pauli_sum(text, n)});
  return make_lindblad_model(n, std::move(h), std::move(jumps));
}

}  // namespace lgap

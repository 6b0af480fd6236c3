#pragma once

// Experiment commands behind the `lgap` CLI. Each command validates its
// configuration before touching the filesystem, so a malformed config leaves
// no files behind.
//
// Every CSV starts with `# key = value` lines holding the fully resolved
// configuration (defaults materialized), followed by a fixed header row.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lgap/config.hpp"
#include "lgap/cost.hpp"
#include "lgap/liouvillian.hpp"
#include "lgap/solver.hpp"
#include "lgap/spectrum.hpp"

namespace lgap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;

inline const char* kTraceColumns = "stage,step,cost,E_r,E_i,grad_norm,fidelity";
inline const char* kDegenerateTraceColumns = "offset_m,stage,step,cost,E_r,E_i,grad_norm,fidelity";
inline const char* kResultColumns =
    "gap,E_r_final,E_i_final,converged,final_cost,pretrain_cost,iterations,attempts,ed_gap";
inline const char* kDegenerateResultColumns =
    "gap,E_r_final,E_i_final,converged,final_cost,pretrain_cost,iterations,attempts,ed_gap,"
    "delta_e,offsets_tried";
inline const char* kSweepColumns = "value,gap_vqa,gap_ed,rel_error,iterations,status";

using Metadata = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline const char* to_string(GradientMethod g) {
  return g == GradientMethod::adjoint ? "adjoint" : "finite_difference";
}

inline Metadata model_metadata(const ModelConfig& m) {
  Metadata md{{"model", m.kind}, {"model.N", std::to_string(m.n.value_or(0))}};
  if (m.kind == "xxz") {
    md.emplace_back("model.Jz", format_number(m.jz));
    md.emplace_back("model.gamma", format_number(m.gamma));
    md.emplace_back("model.jump", m.jump == JumpKind::lowering ? "lowering" : "dephasing");
  } else {
    md.emplace_back("model.H", m.hamiltonian);
    for (const auto& [rate, text] : m.custom_jumps)
      md.emplace_back("model.jump", format_number(rate) + " : " + text);
  }
  return md;
}

/// Resolved solver settings. `out` and `workers` are excluded: they do not
/// change results, and identical runs must give byte-identical files.
inline Metadata optimizer_metadata(const OptimizerOptions& o, int blocks, double kappa) {
  return {{"blocks", std::to_string(blocks)},
          {"kappa", format_number(kappa)},
          {"seed", std::to_string(o.seed)},
          {"max_iterations", std::to_string(o.max_iterations)},
          {"grad_tol", format_number(o.grad_tol)},
          {"cost_tol", format_number(o.cost_tol)},
          {"fd_step", format_number(o.fd_step)},
          {"theta_init_scale", format_number(o.theta_init_scale)},
          {"gradient", to_string(o.gradient)},
          {"pretrain_starts", std::to_string(o.pretrain_starts)},
          {"max_restarts", std::to_string(o.max_restarts)},
          {"success_cost", format_number(o.success_cost)},
          {"nonzero_threshold", format_number(o.nonzero_threshold)}};
}

inline void write_metadata(std::ostream& os, const std::string& command, const Metadata& md) {
  os << "# command = " << command << '\n';
  for (const auto& [k, v] : md) os << "# " << k << " = " << v << '\n';
}

inline std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

inline void write_trace_row(std::ostream& os, const IterationRecord& r, bool with_offset) {
  if (with_offset) os << r.offset_index << ',';
  os << to_string(r.stage) << ',' << r.step << ',' << format_number(r.cost) << ','
     << format_number(r.e_r) << ',' << format_number(r.e_i) << ',' << format_number(r.grad_norm)
     << ',' << optional_number(r.fidelity) << '\n';
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

inline int resolved_blocks(const OptimizerOptions& o, const LindbladModel& m) {
  return o.block_count > 0 ? o.block_count : 2 * m.spin_count;
}

inline bool within_dense_limit(const LindbladModel& m) {
  return (Eigen::Index{1} << (2 * m.spin_count)) <= kMaxDenseDimension;
}

inline std::optional<double> reference_gap(const LindbladModel& m) {
  if (!within_dense_limit(m)) return std::nullopt;
  const SpectralResult s = dense_spectrum(vectorize(m));
  if (s.first_excited() < 0) return std::nullopt;
  return s.gap();
}

}  // namespace detail

/// Outcome of a gap or gap-degenerate run together with its resolved settings.
struct GapRun {
  GapResult result;
  std::optional<double> ed_gap;
  std::optional<double> delta_e;  // degenerate runs only
  Metadata metadata;
};

inline GapRun run_gap(const RunConfig& cfg, bool degenerate) {
  validate(cfg);
  const LindbladModel model = build_model(*cfg.model);
  GapRun run;
  const VectorizedLiouvillian l = vectorize(model);
  const double kappa = cfg.optimizer.kappa ? *cfg.optimizer.kappa : default_kappa(l);
  run.metadata = detail::model_metadata(*cfg.model);
  const Metadata opt = detail::optimizer_metadata(cfg.optimizer, detail::resolved_blocks(cfg.optimizer, model), kappa);
  run.metadata.insert(run.metadata.end(), opt.begin(), opt.end());
  if (degenerate) {
    run.delta_e = cfg.delta_e ? *cfg.delta_e : default_delta_e(l, cfg.delta_e_options);
    run.metadata.emplace_back("delta_e", format_number(*run.delta_e));
    run.metadata.emplace_back("delta_e_source", cfg.delta_e ? "config" : "default_delta_e");
    run.metadata.emplace_back("delta_e_safety", format_number(cfg.delta_e_options.safety));
    run.metadata.emplace_back("delta_e_register", cfg.delta_e_options.exponent == DeltaERegister::vectorized
                                                      ? "vectorized"
                                                      : "physical");
    run.metadata.emplace_back("max_offsets", std::to_string(cfg.max_offsets));
    run.result = solve_gap_degenerate(model, *run.delta_e, cfg.optimizer, cfg.max_offsets);
  } else {
    run.result = solve_gap(model, cfg.optimizer);
  }
  run.ed_gap = detail::reference_gap(model);
  return run;
}

inline void write_gap_outputs(const GapRun& run, const std::filesystem::path& dir, bool degenerate) {
  std::filesystem::create_directories(dir);
  const std::string command = degenerate ? "gap-degenerate" : "gap";
  {
    auto f = detail::open_output(dir / "trace.csv");
    detail::write_metadata(f, command, run.metadata);
    f << (degenerate ? kDegenerateTraceColumns : kTraceColumns) << '\n';
    for (const auto& r : run.result.stage_traces) detail::write_trace_row(f, r, degenerate);
  }
  auto f = detail::open_output(dir / "result.csv");
  detail::write_metadata(f, command, run.metadata);
  const GapResult& r = run.result;
  f << (degenerate ? kDegenerateResultColumns : kResultColumns) << '\n';
  f << format_number(r.gap) << ',' << format_number(r.e_r_final) << ',' << format_number(r.e_i_final)
    << ',' << (r.converged ? "true" : "false") << ',' << format_number(r.final_cost) << ','
    << format_number(r.pretrain_cost) << ',' << r.iterations << ',' << r.attempts << ','
    << detail::optional_number(run.ed_gap);
  if (degenerate) {
    f << ',' << format_number(*run.delta_e) << ',';
    for (std::size_t i = 0; i < r.offsets_tried.size(); ++i)
      f << (i ? ";" : "") << format_number(r.offsets_tried[i]);
  }
  f << '\n';
}

inline int cmd_gap(const RunConfig& cfg, std::ostream& log = std::cout) {
  const GapRun run = run_gap(cfg, false);
  write_gap_outputs(run, cfg.out, false);
  log << "gap " << format_number(run.result.gap) << " (ED " << detail::optional_number(run.ed_gap)
      << "), converged " << (run.result.converged ? "yes" : "no") << ", wrote " << cfg.out << "/\n";
  return run.result.converged ? kExitOk : kExitNotConverged;
}

inline int cmd_gap_degenerate(const RunConfig& cfg, std::ostream& log = std::cout) {
  const GapRun run = run_gap(cfg, true);
  write_gap_outputs(run, cfg.out, true);
  log << "gap " << format_number(run.result.gap) << " (ED " << detail::optional_number(run.ed_gap)
      << ") after " << run.result.offsets_tried.size() << " offset(s), delta_e "
      << format_number(*run.delta_e) << ", converged " << (run.result.converged ? "yes" : "no")
      << ", wrote " << cfg.out << "/\n";
  return run.result.converged ? kExitOk : kExitNotConverged;
}

struct SweepRow {
  double value = 0;
  std::optional<double> gap_vqa;
  std::optional<double> gap_ed;
  std::optional<double> rel_error;
  int iterations = 0;
  std::string status;  // ok | not_converged | failed
};

/// One independent gap solve per value; points run on a bounded worker pool
/// and rows are written in input order by the calling thread.
inline std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.sweep_axis != "gamma" && cfg.sweep_axis != "N")
    throw config_error("missing or invalid field 'sweep.axis' (gamma | N)", 0, "sweep.axis");
  if (cfg.sweep_values.empty())
    throw config_error("field 'sweep.values' is empty", 0, "sweep.values");
  if (cfg.model->kind != "xxz")
    throw config_error("sweeps require model = xxz", 0, "model");
  for (double v : cfg.sweep_values)
    if (cfg.sweep_axis == "N" && (v < 1 || v != std::floor(v)))
      throw config_error("sweep over N needs positive integers", 0, "sweep.values");

  std::vector<SweepRow> rows(cfg.sweep_values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = cfg.sweep_values[i];
      try {
        ModelConfig mc = *cfg.model;
        if (cfg.sweep_axis == "gamma") mc.gamma = row.value;
        else mc.n = static_cast<int>(row.value);
        const LindbladModel model = build_model(mc);
        const GapResult r = solve_gap(model, cfg.optimizer);
        row.gap_vqa = r.gap;
        row.iterations = r.iterations;
        row.gap_ed = detail::reference_gap(model);
        if (row.gap_ed && *row.gap_ed > 0) row.rel_error = std::abs(r.gap - *row.gap_ed) / *row.gap_ed;
        row.status = r.converged ? "ok" : "not_converged";
      } catch (const std::exception&) {
        row.status = "failed";
      }
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t pool = std::min<std::size_t>(cfg.workers > 0 ? static_cast<std::size_t>(cfg.workers) : hw,
                                                 rows.size());
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 1; t < pool; ++t) threads.emplace_back(worker);
    worker();
  }
  return rows;
}

inline void write_sweep(const RunConfig& cfg, const std::vector<SweepRow>& rows,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Metadata md = detail::model_metadata(*cfg.model);
  md.emplace_back("sweep.axis", cfg.sweep_axis);
  std::string values;
  for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i)
    values += (i ? "," : "") + format_number(cfg.sweep_values[i]);
  md.emplace_back("sweep.values", values);
  const auto blocks = cfg.optimizer.block_count > 0 ? std::to_string(cfg.optimizer.block_count) : std::string("2N");
  Metadata opt = detail::optimizer_metadata(cfg.optimizer, 0, 0);
  opt[0].second = blocks;
  opt[1].second = cfg.optimizer.kappa ? format_number(*cfg.optimizer.kappa) : "default_kappa";
  md.insert(md.end(), opt.begin(), opt.end());
  auto f = detail::open_output(dir / "sweep.csv");
  detail::write_metadata(f, "sweep", md);
  f << kSweepColumns << '\n';
  for (const auto& r : rows)
    f << format_number(r.value) << ',' << detail::optional_number(r.gap_vqa) << ','
      << detail::optional_number(r.gap_ed) << ',' << detail::optional_number(r.rel_error) << ','
      << r.iterations << ',' << r.status << '\n';
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& log = std::cout) {
  const auto rows = run_sweep(cfg);
  write_sweep(cfg, rows, cfg.out);
  const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status == "ok"; });
  log << rows.size() << " sweep point(s), " << (all_ok ? "all converged" : "some failed")
      << ", wrote " << cfg.out << "/sweep.csv\n";
  return all_ok ? kExitOk : kExitNotConverged;
}

/// Prints the sorted spectrum of the vectorized Liouvillian as CSV.
inline int cmd_ed(const RunConfig& cfg, std::ostream& out = std::cout) {
  validate(cfg);
  const LindbladModel model = build_model(*cfg.model);
  const SpectralResult s = dense_spectrum(vectorize(model));
  detail::write_metadata(out, "ed", detail::model_metadata(*cfg.model));
  out << "# degeneracy = " << s.zero_count << '\n';
  out << "# gap = " << (s.first_excited() >= 0 ? format_number(s.gap()) : std::string()) << '\n';
  out << "k,re,im\n";
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k)
    out << k << ',' << format_number(s.eigenvalues(k).real()) << ','
        << format_number(s.eigenvalues(k).imag()) << '\n';
  return kExitOk;
}

}  // namespace lgap

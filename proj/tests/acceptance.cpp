// Acceptance run: one PASS/FAIL line per criterion, each followed by the
// measured values. `--slow` switches the size sweeps to N=4.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lgap/checks.hpp"
#include "lgap/runner.hpp"

using namespace lgap;
namespace fs = std::filesystem;

namespace {

struct Clause {
  std::string what;
  bool ok;
};

struct Verdict {
  std::vector<Clause> clauses;
  void add(const std::string& what, bool ok) { clauses.push_back({what, ok}); }
  bool passed() const {
    for (const auto& c : clauses)
      if (!c.ok) return false;
    return !clauses.empty();
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig xxz_config(int n, double jz, double gamma, JumpKind jump) {
  RunConfig c;
  c.model.emplace();
  c.model->kind = "xxz";
  c.model->n = n;
  c.model->jz = jz;
  c.model->gamma = gamma;
  c.model->jump = jump;
  return c;
}

std::optional<double> final_fidelity(const GapResult& r) {
  return r.stage_traces.empty() ? std::nullopt : r.stage_traces.back().fidelity;
}

const fs::path kWork = fs::temp_directory_path() / "lgap_acceptance";

Verdict decay_oracle() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const LindbladModel m = make_lindblad_model(1, PauliSum(1), {{1.0, lowering_operator(1, 0)}});
  const SpectralResult s = dense_spectrum(vectorize(m));
  const double expected[] = {0, -0.5, -0.5, -1};
  double worst = 0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(s.eigenvalues(k) - expected[k]));
  v.add("ED eigenvalues {0,-1/2,-1/2,-1} max error " + num(worst) + " <= 1e-9", worst <= 1e-9);
  const GapResult r = solve_gap(m);
  v.add("VQA gap " + num(r.gap) + " within 1e-3 of 0.5", std::abs(r.gap - 0.5) <= 1e-3);
  const double t = seconds_since(t0);
  v.add("runtime " + num(t) + " s < 10 s", t < 10);
  return v;
}

RunConfig fig2_config() {
  RunConfig c = xxz_config(2, 0.5, 1.0, JumpKind::lowering);
  c.optimizer.block_count = 4;
  return c;
}

Verdict fig2() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = fig2_config();
  cfg.out = (kWork / "fig2_a").string();
  const GapRun run = run_gap(cfg, false);
  write_gap_outputs(run, cfg.out, false);
  const GapResult& r = run.result;
  v.add("pre-training cost " + num(r.pretrain_cost) + " < 1e-4", r.pretrain_cost < 1e-4);
  const double ed = *run.ed_gap;
  v.add("|E_r| " + num(r.gap) + " vs ED gap " + num(ed) + ", relative error " + num(rel(r.gap, ed)) + " <= 1e-2",
        r.converged && rel(r.gap, ed) <= 1e-2);
  const auto fid = final_fidelity(r);
  v.add("final fidelity " + (fid ? num(*fid) : std::string("n/a")) + " > 0.99", fid && *fid > 0.99);
  const double t = seconds_since(t0);
  v.add("runtime " + num(t) + " s < 300 s", t < 300);
  return v;
}

Verdict size_sweep(const std::vector<double>& sizes) {
  Verdict v;
  RunConfig cfg = xxz_config(2, 0.5, 1.0, JumpKind::lowering);
  cfg.sweep_axis = "N";
  cfg.sweep_values = sizes;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_sweep(cfg);
  int prev_iters = -1;
  for (const auto& row : rows) {
    const bool ok = row.status == "ok" && row.rel_error && *row.rel_error <= 1e-2;
    v.add("N=" + num(row.value) + ": gap " + (row.gap_vqa ? num(*row.gap_vqa) : "n/a") + " vs ED " +
              (row.gap_ed ? num(*row.gap_ed) : "n/a") + ", relative error " +
              (row.rel_error ? num(*row.rel_error) : "n/a") + " <= 1e-2, " + std::to_string(row.iterations) +
              " iterations (" + row.status + ")",
          ok);
    if (prev_iters >= 0)
      v.add("iterations grow with N (" + std::to_string(prev_iters) + " -> " + std::to_string(row.iterations) + ")",
            row.iterations > prev_iters);
    prev_iters = row.iterations;
  }
  v.add("sweep wall time " + num(seconds_since(t0)) + " s", true);
  return v;
}

Verdict gamma_sweep(int n) {
  Verdict v;
  RunConfig cfg = xxz_config(n, 0.5, 1.0, JumpKind::lowering);
  cfg.sweep_axis = "gamma";
  cfg.sweep_values = {0.5, 1.0, 1.5, 2.0};
  const auto rows = run_sweep(cfg);
  // Least-squares line through the origin for the ED gaps.
  double sxy = 0, sxx = 0;
  for (const auto& row : rows) {
    if (!row.gap_ed) {
      v.add("ED gap missing at gamma=" + num(row.value), false);
      return v;
    }
    sxy += row.value * *row.gap_ed;
    sxx += row.value * row.value;
  }
  const double slope = sxy / sxx;
  double worst = 0;
  for (const auto& row : rows) worst = std::max(worst, rel(slope * row.value, *row.gap_ed));
  v.add("N=" + std::to_string(n) + " ED gaps fit gap = " + num(slope) + " * gamma, max relative deviation " +
            num(worst) + " <= 5%",
        worst <= 0.05);
  for (const auto& row : rows) {
    const bool ok = row.status == "ok" && row.rel_error && *row.rel_error <= 1e-2;
    v.add("gamma=" + num(row.value) + ": VQA " + (row.gap_vqa ? num(*row.gap_vqa) : "n/a") + " vs ED " +
              num(*row.gap_ed) + ", relative error " + (row.rel_error ? num(*row.rel_error) : "n/a") + " <= 1e-2",
          ok);
  }
  return v;
}

Verdict fig4() {
  Verdict v;
  const LindbladModel m = build_xxz_model(2, 1.0, 1.0, JumpKind::dephasing);
  const GapReference ed = exact_gap(m);
  v.add("ED steady-state degeneracy " + std::to_string(ed.degeneracy) + " >= 2", ed.degeneracy >= 2);
  const GapResult r = solve_gap_degenerate(m, 0.3, OptimizerOptions{});
  std::map<int, double> final_e_r;
  for (const auto& rec : r.stage_traces)
    if (rec.stage == Stage::main) final_e_r[rec.offset_index] = rec.e_r;
  for (int mm : {0, 1}) {
    const auto it = final_e_r.find(mm);
    const bool ok = it != final_e_r.end() && std::abs(it->second) <= 1e-3;
    v.add("offset m=" + std::to_string(mm) + ": |E_r| " + (it != final_e_r.end() ? num(std::abs(it->second)) : "n/a") +
              " <= 1e-3",
          ok);
  }
  const int escape = static_cast<int>(r.offsets_tried.size()) - 1;
  v.add("converges at m=2 (observed m=" + std::to_string(escape) + ", E_r0=" + num(r.offsets_tried.back()) + ")",
        r.converged && escape == 2);
  v.add("gap " + num(r.gap) + " vs ED " + num(ed.gap) + ", relative error " + num(rel(r.gap, ed.gap)) + " <= 1e-2",
        r.converged && rel(r.gap, ed.gap) <= 1e-2);
  const auto fid = final_fidelity(r);
  v.add("final fidelity " + (fid ? num(*fid) : std::string("n/a")) + " > 0.99", fid && *fid > 0.99);
  return v;
}

Verdict property_suite() {
  Verdict v;
  const auto results = run_checks();
  const char* required[] = {"variance_nonnegative", "expansion_path",       "bell_annihilation",
                            "excited_bell_orthogonality", "e_gradient",     "vec_identity",
                            "spectrum_sanity"};
  for (const char* name : required) {
    bool seen = false;
    for (const auto& r : results)
      if (r.name == name) {
        seen = true;
        v.add(r.name + ": " + r.detail, r.passed);
      }
    if (!seen) v.add(std::string(name) + ": not run", false);
  }
  for (const auto& r : results) {
    bool listed = false;
    for (const char* name : required) listed = listed || r.name == name;
    if (!listed) v.add(r.name + ": " + r.detail, r.passed);
  }
  return v;
}

Verdict determinism() {
  Verdict v;
  RunConfig cfg = fig2_config();
  cfg.out = (kWork / "fig2_b").string();
  write_gap_outputs(run_gap(cfg, false), cfg.out, false);
  const fs::path a = kWork / "fig2_a" / "trace.csv", b = kWork / "fig2_b" / "trace.csv";
  if (!fs::exists(a)) {
    RunConfig first = fig2_config();
    first.out = (kWork / "fig2_a").string();
    write_gap_outputs(run_gap(first, false), first.out, false);
  }
  const std::string ta = slurp(a), tb = slurp(b);
  v.add("trace.csv byte-identical across two seeded runs (" + std::to_string(ta.size()) + " bytes)",
        !ta.empty() && ta == tb);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const bool slow = argc > 1 && std::string(argv[1]) == "--slow";
  fs::remove_all(kWork);
  fs::create_directories(kWork);

  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> run;
  };
  const std::vector<double> sizes = slow ? std::vector<double>{2, 3, 4} : std::vector<double>{2, 3};
  const std::vector<Criterion> criteria = {
      {1, "single-qubit decay oracle", decay_oracle},
      {2, "XXZ N=2 two-stage solve", fig2},
      {3, slow ? "size sweep N=2,3,4" : "size sweep N=2,3", [&] { return size_sweep(sizes); }},
      {4, slow ? "gamma sweep N=4" : "gamma sweep N=3", [&] { return gamma_sweep(slow ? 4 : 3); }},
      {5, "dephasing offset scan", fig4},
      {6, "property suite", property_suite},
      {7, "determinism", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.add(std::string("threw: ") + e.what(), false);
    }
    const bool ok = v.passed();
    failed += ok ? 0 : 1;
    std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << " ("
              << num(seconds_since(t0)) << " s)\n";
    for (const auto& cl : v.clauses) std::cout << "    [" << (cl.ok ? "ok" : "FAILED") << "] " << cl.what << '\n';
    std::cout.flush();
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << '/' << criteria.size()
            << " criteria passed\n";
  fs::remove_all(kWork);
  return failed == 0 ? 0 : 1;
}

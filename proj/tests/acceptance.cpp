// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rotsym/experiments.hpp"
#include "rotsym/fields.hpp"
#include "rotsym/jacobi.hpp"

using namespace rotsym;
namespace fs = std::filesystem;

namespace {

struct Run {
  RunResult result;
  Table assertions;
};

std::map<std::string, Run> runs;
fs::path root;

const Run& get(const std::string& name) {
  auto it = runs.find(name);
  if (it != runs.end()) return it->second;
  RunOptions o;
  o.out_dir = (root / name).string();
  Run r;
  r.result = run_experiment(name, o);
  if (r.result.code != 1) r.assertions = read_csv((root / name / "assertions.csv").string());
  return runs[name] = r;
}

std::string measured(const Run& r, const std::string& name) {
  const auto cn = r.assertions.column("name"), cm = r.assertions.column("measured");
  for (const auto& row : r.assertions.rows)
    if (row[cn] == name) return row[cm];
  return "?";
}

std::string failures(const Run& r) {
  if (r.result.code == 1) return "error: " + r.result.message;
  std::string s;
  const auto cn = r.assertions.column("name"), cp = r.assertions.column("pass");
  for (const auto& row : r.assertions.rows)
    if (row[cp] != "true") s += " " + row[cn];
  return s.empty() ? "" : "failed:" + s;
}

int failed_count = 0;

void line(int k, bool ok, const std::string& what, double seconds, double budget,
          const std::string& detail) {
  char buf[64];
  if (std::isinf(budget))
    std::snprintf(buf, sizeof buf, "%.1f s", seconds);
  else
    std::snprintf(buf, sizeof buf, "%.1f s of %.0f s", seconds, budget);
  const bool in_time = seconds <= budget;
  ok = ok && in_time;
  failed_count += !ok;
  std::printf("criterion %2d %s  %s (%s)%s  %s\n", k, ok ? "PASS" : "FAIL", what.c_str(), buf,
              in_time ? "" : " over budget", detail.c_str());
  std::fflush(stdout);
}

void experiment_criterion(int k, const std::string& what, const std::vector<std::string>& names,
                          double budget, const std::vector<std::pair<std::string, std::string>>& show) {
  bool ok = true;
  double secs = 0;
  std::string detail, fails;
  for (const auto& n : names) {
    const Run& r = get(n);
    ok = ok && r.result.code == 0;
    secs += r.result.seconds;
    const std::string f = failures(r);
    if (!f.empty()) fails += " [" + n + " " + f + "]";
  }
  for (const auto& [exp, a] : show) detail += a + "=" + measured(get(exp), a) + " ";
  line(k, ok, what, secs, budget, detail + fails);
}

void mode0_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  SphereSpectrum spec = sphere_spectrum(4, 4);
  RotationFieldSet f = reference_fields(4);
  std::mt19937_64 g(2024);
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> Z(-3, 3);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec c = Vec::Zero(spec.modes());
    for (int m = 1; m < spec.modes(); ++m) c(m) = 0.1 * N(g);
    const double a1 = 0.05 * N(g), a2 = 0.05 * N(g);
    RadiusFn r = [&](const Vec& th, double z1, double z2) {
      return std::sqrt(2.0) + a1 * z1 + a2 * z2 + c.dot(spec.eval_basis(th));
    };
    const double z1 = Z(g), z2 = Z(g);
    for (int a = 0; a < f.basis.N(); ++a)
      worst = std::max(worst, std::abs(mode0_check(spec, r, 4, f, a, z1, z2).divergence));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char d[96];
  std::snprintf(d, sizeof d, "max |integral of div| = %.3g over 100 radius functions", worst);
  line(6, worst <= 1e-10, "mode-0 divergence identity", secs, 10, d);
}

void determinism_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  int files = 0;
  for (const auto& def : experiment_registry()) {
    const Run& first = get(def.name);
    if (first.result.code == 1) {
      ok = false;
      detail += " " + def.name + "(no first run)";
      continue;
    }
    RunOptions o;
    o.out_dir = (root / (def.name + "-rerun")).string();
    o.config_path = (root / def.name / "manifest.json").string();
    RunResult again = run_experiment(def.name, o);
    if (again.code == 1) {
      ok = false;
      detail += " " + def.name + "(rerun error)";
      continue;
    }
    for (const auto& e : fs::directory_iterator(root / def.name)) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      const fs::path other = fs::path(o.out_dir) / e.path().filename();
      if (!fs::exists(other) || read_file(e.path().string()) != read_file(other.string())) {
        ok = false;
        detail += " " + def.name + "/" + e.path().filename().string();
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  line(10, ok, "determinism", secs, std::numeric_limits<double>::infinity(),
       std::to_string(files) + " csv files compared" + (ok ? "" : "; differing:" + detail));
}

}  // namespace

int main() {
  root = fs::temp_directory_path() / "rotsym_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  experiment_criterion(1, "Bowl ODE suite", {"bowl-profile"}, 1,
                       {{"bowl-profile", "residual_n5"}});
  experiment_criterion(2, "rotation-field rigidity", {"fit-rigidity"}, 30,
                       {{"fit-rigidity", "max_q_error"}, {"fit-rigidity", "max_S_error"},
                        {"fit-rigidity", "max_defect"}});
  experiment_criterion(3, "alignment constant", {"align-constant"}, 120,
                       {{"align-constant", "C"}});
  experiment_criterion(4, "mode decay", {"mode-decay"}, 120,
                       {{"mode-decay", "exponent_rel_error"}, {"mode-decay", "aggregate_power"}});
  experiment_criterion(5, "kernel oracle and flux envelope", {"kernel-oracle", "flux-bound"}, 60,
                       {{"kernel-oracle", "max_abs_diff"}, {"flux-bound", "flux_C50"}});
  mode0_criterion();
  experiment_criterion(7, "improvement mechanism", {"improvement-sweep"}, 600,
                       {{"improvement-sweep", "factor_largest_L0_l1"},
                        {"improvement-sweep", "factor_largest_L0_l2"}});
  experiment_criterion(8, "barrier negativity and maximum principle",
                       {"barrier-sweep", "translator-step3"}, 300,
                       {{"barrier-sweep", "coefficient_max"}, {"barrier-sweep", "slope_lateral"},
                        {"barrier-sweep", "slope_split"}, {"barrier-sweep", "slope_initial"},
                        {"translator-step3", "identity_max"}});
  experiment_criterion(9, "convex geometry", {"diameters", "density-table"}, 180,
                       {{"diameters", "max_ratio"}, {"diameters", "sphere_rel_error"},
                        {"density-table", "min_gap_over_ten_error"}});
  determinism_criterion();

  std::printf("%d of 10 criteria failed\n", failed_count);
  return failed_count ? 1 : 0;
}

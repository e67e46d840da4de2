#include <doctest.h>

#include <filesystem>

#include "rotsym/experiments.hpp"

using namespace rotsym;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("rotsym_test_" + name);
  fs::remove_all(p);
  return p;
}

RunOptions into(const fs::path& p) {
  RunOptions o;
  o.out_dir = p.string();
  return o;
}

}  // namespace

TEST_CASE("registry lists the eleven experiments") {
  CHECK(experiment_registry().size() == 11);
  for (const char* n : {"bowl-profile", "fit-rigidity", "align-constant", "mode-decay",
                        "kernel-oracle", "flux-bound", "improvement-sweep", "barrier-sweep",
                        "translator-step3", "diameters", "density-table"})
    CHECK(find_experiment(n) != nullptr);
}

TEST_CASE("csv numbers round-trip exactly") {
  for (double v : {0.1, 1.0 / 3, 1e-300, -2.5e17, 6.02214076e23})
    CHECK(std::stod(fmt(v)) == v);
}

TEST_CASE("bowl-profile run writes artifacts and passes") {
  fs::path d = scratch("bowl");
  RunResult r = run_experiment("bowl-profile", into(d));
  CHECK(r.code == 0);
  for (const char* f : {"manifest.json", "assertions.csv", "bowl_profile.csv", "bowl_profile.svg"})
    CHECK(fs::exists(d / f));
  Table t = read_csv((d / "bowl_profile.csv").string());
  const std::size_t c = t.column("dphi_ge_r_over_n");
  for (const auto& row : t.rows) CHECK(row[c] == "true");
}

TEST_CASE("rerun from the manifest is byte identical") {
  fs::path a = scratch("det_a"), b = scratch("det_b");
  RunResult ra = run_experiment("kernel-oracle", into(a));
  RunOptions ob = into(b);
  ob.config_path = (a / "manifest.json").string();
  RunResult rb = run_experiment("kernel-oracle", ob);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  for (const auto& e : fs::directory_iterator(a))
    if (e.path().extension() == ".csv")
      CHECK(read_file(e.path().string()) == read_file((b / e.path().filename()).string()));
}

TEST_CASE("configuration errors exit with 1") {
  CHECK(run_experiment("unknown", {}).code == 1);
  fs::path d = scratch("cfg");
  fs::create_directories(d);
  auto bad = [&](const std::string& text) {
    write_file((d / "c.json").string(), text);
    RunOptions o = into(d / "out");
    o.config_path = (d / "c.json").string();
    return run_experiment("bowl-profile", o).code;
  };
  CHECK(bad("{\"nope\": 1}") == 1);
  CHECK(bad("{\"r_max\": {\"a\": 1}}") == 1);
  CHECK(bad("{\"r_max\": \"far\"}") == 1);
  CHECK(bad("not json") == 1);
  CHECK(bad("{\"r_max\": 10}") == 0);
}

TEST_CASE("failed assertions exit with 2") {
  fs::path d = scratch("fail");
  fs::create_directories(d);
  write_file((d / "c.json").string(), "{\"tol\": 1e-14}");
  RunOptions o = into(d / "out");
  o.config_path = (d / "c.json").string();
  CHECK(run_experiment("bowl-profile", o).code == 2);
  CHECK(report((d / "out").string()).code == 2);
}

TEST_CASE("report on passing, empty and missing directories") {
  fs::path d = scratch("rep");
  REQUIRE(run_experiment("bowl-profile", into(d)).code == 0);
  ReportResult r = report(d.string());
  CHECK(r.code == 0);
  CHECK(r.summary["failed"] == 0);
  fs::path e = scratch("empty");
  fs::create_directories(e);
  CHECK(report(e.string()).code == 1);
  CHECK(report((e / "missing").string()).code == 1);
}

// End-to-end tests of the strip-dirac command-line tool: exit codes, artifact
// layout, JSON schema fields, CSV shape, and byte-level determinism across
// reruns and worker counts.  The binary path is injected by the build as
// STRIP_DIRAC_BIN; every case works inside a process-unique temp directory.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("stripdirac_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = std::string(STRIP_DIRAC_BIN) + " " + args;
  cmd += " >/dev/null 2>";
  cmd += stderr_file.empty() ? std::string("/dev/null") : stderr_file;
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << j.dump(2) << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

json quick_config() {
  return json{{"delta", 1.0},
              {"h", {0.3, 0.2}},
              {"profile", {{"amp", 0.9}, {"w", 1.6}, {"L0", 3.5}, {"ramp", 1.2}}},
              {"grid", {{"ns", 241}, {"nt", 33}}},
              {"fiber", {{"n", 48}, {"nq", 180}, {"branches", 3}, {"nxi", 21}}},
              {"hardy", {{"M", 12}, {"k_max", 2}}}};
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(const fs::path& p) {
  CsvTable t;
  std::istringstream in(slurp(p));
  std::string line;
  REQUIRE(std::getline(in, line));
  std::istringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::vector<double> row;
    for (std::string cell; std::getline(rs, cell, ',');)
      row.push_back(std::stod(cell));
    REQUIRE(row.size() == t.header.size());
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

TEST_CASE("potential, a0, conformal: exit 0, schema, nested out dir") {
  const fs::path cfg = write_config("quick.json", quick_config());
  const fs::path out = work_dir() / "nested" / "a" / "b";

  CHECK(run_cli("potential --config " + cfg.string() + " --out " + out.string()) == 0);
  const json pot = load_json(out / "potential.json");
  CHECK(pot["manifest"]["config_hash"].get<std::string>().size() == 16);
  CHECK(pot["manifest"]["versions"].contains("stripdirac"));
  CHECK(pot["phi_min"].get<double>() < 0.0);
  CHECK(pot["flags"]["unique_min"].get<bool>());
  CHECK(pot["flags"]["strictly_below_straight"].get<bool>());
  CHECK(pot["conventions"].contains("phi_min"));
  CHECK(pot["hessian"]["a"].get<double>() > 0.0);
  CHECK(pot["hessian"]["b"].get<double>() > pot["hessian"]["a"].get<double>());

  CHECK(run_cli("a0 --config " + cfg.string() + " --out " + out.string()) == 0);
  const json a0 = load_json(out / "a0.json");
  CHECK(a0["a0"].get<double>() == doctest::Approx(1.313254056).epsilon(1e-6));
  CHECK(a0["in_range"].get<bool>());
  CHECK(a0["xi_hat"].get<double>() < 0.0);

  CHECK(run_cli("conformal --config " + cfg.string() + " --out " + out.string()) == 0);
  const json cf = load_json(out / "conformal.json");
  CHECK(cf["cr_residual"].get<double>() > 0.0);
  CHECK(cf["cr_residual"].get<double>() < 1e-2);
  CHECK(cf["disk"]["koebe_ok"].get<bool>());
  CHECK(cf["sup_fprime"].get<double>() > 0.0);
}

TEST_CASE("config hash is canonical: explicit defaults hash identically") {
  const json minimal{{"delta", 1.0}, {"h", {0.2}}};
  json expanded = minimal;
  expanded["profile"] = {{"amp", 0.0}, {"w", 1.0}, {"L0", 2.0}, {"ramp", 1.0}};
  expanded["L"] = 8.0;  // the resolved default L0 + 6 * delta
  expanded["grid"] = {{"ns", 201}, {"nt", 41}};
  expanded["out_dir"] = "out";

  const fs::path ca = write_config("hash_a.json", minimal);
  const fs::path cb = write_config("hash_b.json", expanded);
  const fs::path oa = work_dir() / "hash_a";
  const fs::path ob = work_dir() / "hash_b";
  CHECK(run_cli("potential --config " + ca.string() + " --out " + oa.string()) == 0);
  CHECK(run_cli("potential --config " + cb.string() + " --out " + ob.string()) == 0);
  const auto ha = load_json(oa / "potential.json")["manifest"]["config_hash"];
  const auto hb = load_json(ob / "potential.json")["manifest"]["config_hash"];
  CHECK(ha.get<std::string>() == hb.get<std::string>());
}

TEST_CASE("dispersion: --h override, CSV shape, evenness, determinism") {
  const fs::path cfg = write_config("quick.json", quick_config());
  const fs::path o1 = work_dir() / "disp1";
  const fs::path o2 = work_dir() / "disp2";
  const fs::path o3 = work_dir() / "disp3";

  const std::string args =
      "dispersion --config " + cfg.string() + " --h 0.3 --out ";
  CHECK(run_cli(args + o1.string()) == 0);
  CHECK(run_cli(args + o2.string()) == 0);
  // Same run again with the thread pool forced to a single worker.
  {
    std::string cmd = "STRIPDIRAC_WORKERS=1 " + std::string(STRIP_DIRAC_BIN) +
                      " " + args + o3.string() + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    CHECK(WEXITSTATUS(rc) == 0);
  }

  const json d = load_json(o1 / "dispersion.json");
  REQUIRE(d["runs"].size() == 1);  // the --h flag replaced the config ladder
  CHECK(d["runs"][0]["h"].get<double>() == doctest::Approx(0.3));
  CHECK(d["runs"][0]["branches"].get<int>() == 3);
  CHECK(d["runs"][0]["lambda_ess_pos"].get<double>() > 0.0);
  CHECK(d["runs"][0]["lambda_ess_neg"].get<double>() > 0.0);
  CHECK(d["conventions"].contains("csv_columns"));

  const CsvTable t = parse_csv(o1 / "dispersion_h0.3.csv");
  REQUIRE(t.header ==
          std::vector<std::string>{"xi", "pos_1", "pos_2", "pos_3", "neg_1",
                                   "neg_2", "neg_3"});
  REQUIRE(t.rows.size() == 21);
  const std::size_t n = t.rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = t.rows[i];
    const auto& b = t.rows[n - 1 - i];
    CHECK(a[0] == doctest::Approx(-b[0]).epsilon(1e-12));
    for (std::size_t c = 1; c < a.size(); ++c)
      CHECK(std::abs(a[c] - b[c]) < 1e-8 * std::max(1.0, std::abs(a[c])));
  }
  // Every branch value lies on or above the essential threshold of its sign.
  const double ess_pos = d["runs"][0]["lambda_ess_pos"].get<double>();
  for (const auto& row : t.rows) CHECK(row[1] >= ess_pos - 1e-10);

  for (const char* f : {"dispersion_h0.3.csv", "dispersion_h0.3.svg"}) {
    CHECK(slurp(o1 / f) == slurp(o2 / f));
    CHECK(slurp(o1 / f) == slurp(o3 / f));
  }
  CHECK(load_json(o1 / "dispersion.json")["manifest"]["config_hash"] ==
        load_json(o2 / "dispersion.json")["manifest"]["config_hash"]);
}

TEST_CASE("effective: entries, gap rows, rerun-identical CSV") {
  const fs::path cfg = write_config("quick.json", quick_config());
  const fs::path o1 = work_dir() / "eff1";
  const fs::path o2 = work_dir() / "eff2";
  const std::string args = "effective --config " + cfg.string() + " --out ";
  CHECK(run_cli(args + o1.string()) == 0);
  CHECK(run_cli(args + o2.string()) == 0);

  const json e = load_json(o1 / "effective.json");
  CHECK(e["assumption_ok"].get<bool>());
  CHECK(e["minimum"]["phi_min"].get<double>() < 0.0);
  CHECK(e["g0_abs"].get<double>() > 0.0);
  REQUIRE(e["entries"].size() == 2);
  for (const auto& ent : e["entries"]) {
    REQUIRE(ent["lambda_log"].size() == 2);  // one level per k <= k_max
    for (const auto& v : ent["lambda_log"]) CHECK(v.get<double>() < 0.0);
    for (const auto& v : ent["ratio"]) CHECK(v.get<double>() > 0.5);
    CHECK(ent["trunc_dev"].get<double>() < 0.5);
    CHECK(ent.contains("rr_monotone"));
  }
  REQUIRE(e["gaps"].size() == 2);
  const auto& last = e["gaps"][1];
  CHECK(last["h"].get<double>() == doctest::Approx(0.2));
  CHECK(last["margin_log"].get<double>() > 0.0);
  CHECK(last["in_gap"].get<int>() >= 1);

  const CsvTable t = parse_csv(o1 / "effective.csv");
  REQUIRE(t.header ==
          std::vector<std::string>{"h", "lambda_log_1", "lambda_log_2",
                                   "ratio_1", "ratio_2", "rr_monotone",
                                   "trunc_dev", "threshold_log", "margin_log",
                                   "in_gap"});
  REQUIRE(t.rows.size() == 2);
  CHECK(slurp(o1 / "effective.csv") == slurp(o2 / "effective.csv"));
  CHECK(slurp(o1 / "effective_ratios.svg") == slurp(o2 / "effective_ratios.svg"));
}

TEST_CASE("thresholds: schema and pinned ratio at h = 0.2") {
  json cfg_json = quick_config();
  cfg_json["h"] = {0.2};
  const fs::path cfg = write_config("thr.json", cfg_json);
  const fs::path out = work_dir() / "thr";
  CHECK(run_cli("thresholds --config " + cfg.string() + " --out " + out.string()) == 0);

  const json t = load_json(out / "thresholds.json");
  CHECK(t["a0"]["value"].get<double>() == doctest::Approx(1.313254056).epsilon(1e-6));
  REQUIRE(t["rows"].size() == 1);
  const auto& row = t["rows"][0];
  CHECK(row["ratio_pos"].get<double>() == doctest::Approx(0.9981169616).epsilon(1e-5));
  CHECK(row["ratio_pos"].get<double>() <= 1.0 + 1e-6);
  CHECK(std::abs(row["xi_star_pos"].get<double>()) < 0.02);
  CHECK(row["lambda_ess_neg"].get<double>() > 0.0);
  CHECK(row["nu1_zero"].get<double>() > 0.0);
  CHECK(t["lambda_ess_pos"].get<double>() ==
        doctest::Approx(row["lambda_ess_pos"].get<double>()));
  CHECK(t["ratios"]["pos"].size() == 1);
}

TEST_CASE("exit codes: config, assumption, and usage failures") {
  CHECK(run_cli("potential --config " + (work_dir() / "absent.json").string()) == 3);

  const fs::path broken = work_dir() / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run_cli("potential --config " + broken.string()) == 3);

  json unknown = quick_config();
  unknown["bogus"] = 1;
  const fs::path cu = write_config("unknown.json", unknown);
  CHECK(run_cli("potential --config " + cu.string()) == 3);

  json zero_branches = quick_config();
  zero_branches["fiber"]["branches"] = 0;
  const fs::path cz = write_config("zerok.json", zero_branches);
  CHECK(run_cli("dispersion --config " + cz.string()) == 3);

  json flat = quick_config();
  flat["profile"]["amp"] = 0.0;
  const fs::path cf = write_config("flat.json", flat);
  const fs::path errf = work_dir() / "stderr.txt";
  CHECK(run_cli("effective --config " + cf.string() + " --out " +
                    (work_dir() / "flat_out").string(),
                errf.string()) == 4);
  CHECK(slurp(errf).find("assumption violated:") != std::string::npos);

  const fs::path cq = write_config("quick.json", quick_config());
  CHECK(run_cli("frobnicate --config " + cq.string()) == 3);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("dispersion --help") == 0);
}

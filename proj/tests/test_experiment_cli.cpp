#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <json.hpp>

#include "fgns/config.hpp"
#include "fgns/csv.hpp"
#include "fgns/experiments.hpp"
#include "fgns/initial_data.hpp"
#include "fgns/snapshot.hpp"
#include "fgns/spectral_ops.hpp"
#include "support.hpp"

using namespace fgns;
using fgns::test::kPi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fgns_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_quantities(const fs::path& csv) {
  std::map<std::string, std::string> out;
  std::istringstream is(slurp(csv));
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    out[line.substr(0, c1)] = line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
  }
  return out;
}

ExperimentConfig quick_config(const fs::path& out) {
  ExperimentConfig cfg;
  load_config_text("grid.N = 32\nmesh.nodes = 16\nbilinear.C = 0.03\ndata.indicator = 0.5\n", cfg);
  cfg.out = out.string();
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FGNS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  ExperimentConfig cfg;
  load_config_text(
      "# comment\n"
      "grid.N = 48   # trailing comment\n"
      "\n"
      "model.beta=0.8\n"
      "eps = 0.3, 0.1\n"
      "solver.shrink = true\n"
      "seed = 18446744073709551615\n",
      cfg);
  CHECK(cfg.n_axis == 48);
  CHECK(cfg.beta == 0.8);
  CHECK(cfg.eps == std::vector<double>{0.3, 0.1});
  CHECK(cfg.shrink);
  CHECK(cfg.seed == 18446744073709551615ull);
  CHECK(cfg.get("grid.N") == "48");
  CHECK_THROWS_WITH_AS(load_config_text("grid.M = 3\n", cfg), doctest::Contains("grid.M"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config_text("grid.N = 3x\n", cfg), doctest::Contains("grid.N"), ConfigError);
  CHECK_THROWS_AS(load_config_text("grid.N\n", cfg), ConfigError);
  CHECK_THROWS_AS(load_config_text("seed = -1\n", cfg), ConfigError);
  CHECK_THROWS_AS(parse_list("0.1,,0.2", "eps"), ConfigError);
  // every key round-trips through its echo
  ExperimentConfig a;
  ExperimentConfig b;
  for (const auto& [k, v] : a.echo()) b.set(k, v);
  CHECK(a.echo() == b.echo());
  CHECK(a.echo().size() == ExperimentConfig::keys().size());
}

TEST_CASE("config validation and derived exponents") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.lorentz().p == doctest::Approx(6.0).epsilon(1e-12));
  cfg.beta = 1.2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.lorentz_p = 5.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.n_axis = 7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.data_indicator = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("csv formatting") {
  CHECK(fmt(std::nan("")) == "nan");
  CHECK(fmt(-INFINITY) == "-inf");
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23}) CHECK(std::strtod(fmt(v).c_str(), nullptr) == v);
  CsvTable t({"a", "b"});
  t.add({"x,y", "say \"hi\""});
  t.add({"1", "2"});
  CHECK(t.str() == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n1,2\n");
  CHECK_THROWS(t.add({"1"}));
}

TEST_CASE("snapshot round trip is bit exact") {
  const fs::path dir = scratch("snap");
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, 2 * kPi * 1.5, dim == 2 ? 32 : 16);
    std::mt19937_64 rng(5);
    const SpectralVectorField u = random_bandlimited(g, 1.7, rng, 3);
    const fs::path f = dir / ("u" + std::to_string(dim) + ".fgns");
    write_snapshot(f.string(), u, 0.3125);
    const Snapshot s = read_snapshot(f.string());
    CHECK(s.time == 0.3125);
    CHECK(s.field == u);
    CHECK(s.field.divergence_free());
    const std::string raw = slurp(f);
    CHECK(std::vector<unsigned char>(raw.begin(), raw.end()) == encode_snapshot(s.field, s.time));
  }
  // trajectory
  const TorusGrid g(2, 2 * kPi, 16);
  const TimeMesh mesh = TimeMesh::graded(0.7, 5, 2.0);
  const TrajectoryField e = caloric_extension(taylor_green_mixed(g, 1.0), mesh, 0.75);
  write_trajectory((dir / "traj.fgns").string(), e);
  const TrajectoryField back = read_trajectory((dir / "traj.fgns").string());
  CHECK(back.mesh().nodes() == mesh.nodes());
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(back[i] == e[i]);
  // corrupted files
  std::string bytes = slurp(dir / "traj.fgns");
  std::ofstream(dir / "bad.fgns", std::ios::binary) << "FGNX" << bytes.substr(4);
  CHECK_THROWS_AS(read_snapshot((dir / "bad.fgns").string()), ConfigError);
  std::ofstream(dir / "short.fgns", std::ios::binary) << bytes.substr(0, 100);
  CHECK_THROWS_AS(read_records((dir / "short.fgns").string()), ConfigError);
}

TEST_CASE("snapshot byte layout") {
  const int n = 8;
  const TorusGrid g(2, 3.0, n);
  SpectralVectorField u(g);
  // mode k = (1, -2) of component 1 and its mirror
  const std::size_t lin = g.linear_index({1, n - 2, 0});
  u.component(1)[lin] = Complex(0.25, -0.5);
  u.component(1)[g.mirror_index(lin)] = Complex(0.25, 0.5);
  const auto b = encode_snapshot(u, 2.0);
  const std::size_t header = 4 + 4 + 1 + 8 + 8 + 8 + 1;
  REQUIRE(b.size() == header + 2 * static_cast<std::size_t>(n * n) * 16);
  CHECK(std::memcmp(b.data(), "FGNS", 4) == 0);
  auto u32 = [&](std::size_t at) { return b[at] | b[at + 1] << 8 | b[at + 2] << 16 | std::uint32_t(b[at + 3]) << 24; };
  auto f64 = [&](std::size_t at) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = bits << 8 | b[at + static_cast<std::size_t>(i)];
    return std::bit_cast<double>(bits);
  };
  CHECK(u32(4) == kSnapshotVersion);
  CHECK(b[8] == 2);
  CHECK(f64(9) == std::bit_cast<double>(std::uint64_t{n}));  // u64 N read as raw bits
  CHECK(f64(17) == 3.0);
  CHECK(f64(25) == 2.0);
  CHECK(b[33] == 2);
  // ascending k per axis: k = (1, -2) sits at row 1 + n/2, column -2 + n/2
  const std::size_t at = header + (static_cast<std::size_t>(n * n) + (1 + n / 2) * n + (n / 2 - 2)) * 16;
  CHECK(f64(at) == 0.25);
  CHECK(f64(at + 8) == -0.5);
  const std::size_t mirror = header + (static_cast<std::size_t>(n * n) + (n / 2 - 1) * n + (n / 2 + 2)) * 16;
  CHECK(f64(mirror + 8) == 0.5);
}

TEST_CASE("initial data generators") {
  const TorusGrid g(2, 2 * kPi, 32);
  const auto tg = taylor_green(g, 2.0);
  const auto phys = tg.to_physical();
  double err = 0.0;
  for (std::size_t lin = 0; lin < g.size(); ++lin) {
    const MultiIndex idx = g.multi_index(lin);
    const double x = idx[0] * g.spacing(), y = idx[1] * g.spacing();
    err = std::max(err, std::abs(phys[0][lin] - 2.0 * std::sin(x) * std::cos(y)));
    err = std::max(err, std::abs(phys[1][lin] + 2.0 * std::cos(x) * std::sin(y)));
  }
  CHECK(err < 1e-13);
  CHECK(sup_norm(taylor_green_mixed(g, 0.7)) == doctest::Approx(0.7).epsilon(1e-14));

  // The curl is spectral, so the field leaks past the stream function's
  // support at a level that falls with resolution.
  auto leak = [](const TorusGrid& grid) {
    const auto bump = curl_bump(grid, 1.0);
    CHECK(bump.divergence_defect() < 1e-10);
    const double rad = curl_bump_radius(grid);
    const double c = grid.box_len() / 2;
    const auto mag = bump.magnitude();
    double outside = 0.0;
    for (std::size_t lin = 0; lin < grid.size(); ++lin) {
      const MultiIndex idx = grid.multi_index(lin);
      const double dx = idx[0] * grid.spacing() - c, dy = idx[1] * grid.spacing() - c;
      if (std::hypot(dx, dy) > rad + 2 * grid.spacing()) outside = std::max(outside, mag[lin]);
    }
    return outside;
  };
  const double coarse = leak(g);
  const double fine = leak(TorusGrid(2, 2 * kPi, 128));
  CHECK(coarse < 0.05);
  CHECK(fine < 0.1 * coarse);
  const TorusGrid g3(3, 2 * kPi, 16);
  CHECK(curl_bump(g3, 1.0).divergence_defect() < 1e-10);

  const auto r1 = generate_initial_data("random_bandlimited", 1.0, 7, g);
  CHECK(r1 == generate_initial_data("random_bandlimited", 1.0, 7, g));
  CHECK_FALSE(r1 == generate_initial_data("random_bandlimited", 1.0, 8, g));
  CHECK(r1.divergence_defect() < 1e-10);
  CHECK_THROWS_AS(generate_initial_data("vortex", 1.0, 7, g), ConfigError);
}

TEST_CASE("norms of the zero snapshot") {
  const fs::path dir = scratch("zero");
  ExperimentConfig cfg;
  cfg.n_axis = 32;
  write_snapshot((dir / "zero.fgns").string(), SpectralVectorField(cfg.grid()), 0.0);
  cfg.input = (dir / "zero.fgns").string();
  cfg.out = (dir / "out").string();
  const RunResult r = run_experiment(cfg, "norms");
  REQUIRE(r.exit_code == kExitOk);
  const auto q = read_quantities(dir / "out" / "norms.csv");
  CHECK(q.size() >= 11);
  for (const auto& [name, value] : q) CHECK_MESSAGE(std::strtod(value.c_str(), nullptr) == 0.0, name);
}

TEST_CASE("solve then norms reproduces the solution norm") {
  const fs::path dir = scratch("solve");
  ExperimentConfig cfg = quick_config(dir / "solve");
  REQUIRE(run_experiment(cfg, "solve-mild").exit_code == kExitOk);
  const auto sum = read_quantities(dir / "solve" / "summary.csv");
  CHECK(sum.at("converged") == "true");
  ExperimentConfig nc = cfg;
  nc.input = (dir / "solve" / "solution.fgns").string();
  nc.out = (dir / "norms").string();
  REQUIRE(run_experiment(nc, "norms").exit_code == kExitOk);
  const auto q = read_quantities(dir / "norms" / "norms.csv");
  CHECK(q.at("x_norm") == sum.at("x_norm_solution"));
  const auto m = nlohmann::json::parse(slurp(dir / "solve" / "manifest.json"));
  CHECK(m["status"] == "ok");
  CHECK(m["partial"] == false);
  CHECK(m["config"]["grid.N"] == "32");
  for (const auto& a : m["artifacts"]) CHECK(fs::exists(dir / "solve" / a.get<std::string>()));
}

TEST_CASE("runs are deterministic") {
  const fs::path dir = scratch("det");
  ExperimentConfig a = quick_config(dir / "a");
  ExperimentConfig b = quick_config(dir / "b");
  REQUIRE(run_experiment(a, "solve-mild").exit_code == kExitOk);
  REQUIRE(run_experiment(b, "solve-mild").exit_code == kExitOk);
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    const std::string name = e.path().filename().string();
    if (name == "manifest.json" || name == "config.txt") continue;
    CHECK_MESSAGE(slurp(e.path()) == slurp(dir / "b" / name), name);
  }
  auto ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  auto mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  ma["config"].erase("out");
  mb["config"].erase("out");
  CHECK(ma == mb);
}

TEST_CASE("run_experiment maps failures to exit codes") {
  const fs::path dir = scratch("codes");
  ExperimentConfig cfg = quick_config(dir / "x");
  CHECK(run_experiment(cfg, "no-such-command").exit_code == kExitConfig);
  ExperimentConfig nc = cfg;
  nc.max_iter = 2;
  const RunResult r = run_experiment(nc, "solve-mild");
  CHECK(r.exit_code == kExitNonConvergence);
  const auto m = nlohmann::json::parse(slurp(dir / "x" / "manifest.json"));
  CHECK(m["partial"] == true);
  CHECK(m["exit_code"] == kExitNonConvergence);
  ExperimentConfig iv = cfg;
  iv.data_indicator = 0.0;
  iv.bilinear_c = 100.0;
  iv.eps = {0.2};
  CHECK(run_experiment(iv, "compare-eps").exit_code == kExitInvariant);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  const std::string out = (dir / "o").string();
  std::ofstream(dir / "c.txt") << "grid.N = 16\nmesh.nodes = 8\nmodel.beta = 0.8\n";
  CHECK(run_cli("norms --config " + (dir / "c.txt").string() + " --grid.N 32 --out " + out) == 0);
  ExperimentConfig echoed;
  load_config_file((fs::path(out) / "config.txt").string(), echoed);
  CHECK(echoed.n_axis == 32);
  CHECK(echoed.mesh_nodes == 8);
  CHECK(echoed.beta == 0.8);
  CHECK(run_cli("norms --grid.N 16 --eps 0.3,0.2 --seed 9 --out " + out) == 0);
  load_config_file((fs::path(out) / "config.txt").string(), echoed);
  CHECK(echoed.eps == std::vector<double>{0.3, 0.2});
  CHECK(echoed.seed == 9);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("bogus") == 2);
  CHECK(run_cli("norms --no-such-flag 1") == 2);
  CHECK(run_cli("norms --model.beta 1.5 --out " + out) == 2);
  CHECK(run_cli("norms --config " + (dir / "missing.txt").string()) == 2);
  CHECK(run_cli("norms --set grid.M=3 --out " + out) == 2);
  CHECK(run_cli("norms --grid.N 16 --out " + out + " --set solver.max_iter=0") == 2);
  CHECK(::setenv("FGNS_THREADS", "0", 1) == 0);
  CHECK(run_cli("norms --grid.N 16 --out " + out) == 2);
  CHECK(::setenv("FGNS_THREADS", "1", 1) == 0);
  CHECK(run_cli("norms --grid.N 16 --out " + out) == 0);
  ::unsetenv("FGNS_THREADS");
  CHECK(run_cli("solve-mild --grid.N 32 --set mesh.nodes=16 --set bilinear.C=0.03 --set solver.max_iter=2 --out " + out) == 4);
  CHECK(run_cli("compare-eps --grid.N 32 --set mesh.nodes=16 --set bilinear.C=100 --eps 0.2 --out " + out) == 3);
}

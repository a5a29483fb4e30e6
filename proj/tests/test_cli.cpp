// End-to-end checks of the command-line binary, located via the
// RFPCA_CLI environment variable set by CTest.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "rfpca/rfpca.hpp"

using namespace rfpca;

namespace {

namespace fs = std::filesystem;

std::string cli() {
  const char* env = std::getenv("RFPCA_CLI");
  REQUIRE(env != nullptr);
  return env;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rfpca_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_to = "/dev/null") {
  const std::string cmd = cli() + " " + args + " > " + stdout_to + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("simulate is deterministic and emits re-ingestible csv") {
  TempDir dir;
  const auto a = dir.file("a.csv");
  const auto b = dir.file("b.csv");
  CHECK(run("simulate --manifold sphere:2 --n 5 --m 6 --seed 4 --out " + a) == 0);
  CHECK(run("simulate --manifold sphere:2 --n 5 --m 6 --seed 4 --out " + b) == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(read_file(dir.file("a.truth.json")) == read_file(dir.file("b.truth.json")));

  const auto samples = ingest_trajectories_csv(a, make_sphere(2));
  CHECK(samples.size() == 5);

  CHECK(run("simulate --manifold so3 --n 3 --m 5 --seed 1 --out " + dir.file("r.csv")) == 0);
  CHECK(ingest_trajectories_csv(dir.file("r.csv"), make_so3()).size() == 3);
}

TEST_CASE("simulate-fit-reconstruct round trip on rank-limited data") {
  TempDir dir;
  const auto traj = dir.file("traj.csv");
  const auto model_path = dir.file("model.json");
  const auto rec = dir.file("rec.csv");
  // Logs taken at the estimated (not true) mean spread rank-3 data over a
  // few extra curvature components, so reconstruct at the full tangent
  // capacity 2m rather than at the generating rank.
  REQUIRE(run("simulate --manifold sphere:2 --n 100 --m 10 --seed 11 --components 3 --out " +
              traj) == 0);
  REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 20 --out " + model_path,
              dir.file("fit.txt")) == 0);
  REQUIRE(run("reconstruct --model " + model_path + " --K 20 --out " + rec) == 0);

  const auto spec = make_sphere(2);
  const auto original = ingest_trajectories_csv(traj, spec);
  const auto rebuilt = ingest_trajectories_csv(rec, spec);
  REQUIRE(rebuilt.size() == original.size());
  for (std::size_t i = 0; i < original.size(); ++i)
    for (std::size_t j = 0; j < original[i].points.size(); ++j)
      CHECK(geodesic_distance(spec, original[i].points[j], rebuilt[i].points[j]) < 1e-5);

  // The fit output contains the FVE table and a K* line.
  const auto fit_text = read_file(dir.file("fit.txt"));
  CHECK(fit_text.find("FVE") != std::string::npos);
  CHECK(fit_text.find("K* = ") != std::string::npos);

  // Identical command lines give byte-identical models.
  const auto model2 = dir.file("model2.json");
  REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 20 --out " + model2) == 0);
  CHECK(read_file(model_path) == read_file(model2));
}

TEST_CASE("reconstruct at K = 0 emits the mean curve for every subject") {
  TempDir dir;
  const auto traj = dir.file("t.csv");
  const auto model_path = dir.file("m.json");
  const auto rec = dir.file("rec0.csv");
  REQUIRE(run("simulate --manifold sphere:2 --n 4 --m 5 --seed 2 --out " + traj) == 0);
  REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 2 --out " + model_path) == 0);
  REQUIRE(run("reconstruct --model " + model_path + " --K 0 --out " + rec) == 0);
  const auto model = read_model_json(model_path);
  const auto rebuilt = ingest_trajectories_csv(rec, make_sphere(2));
  for (const auto& s : rebuilt)
    for (std::size_t j = 0; j < s.points.size(); ++j)
      CHECK(vm::dist(s.points[j].coords, model.mean_curve[j].coords) < 1e-12);
}

TEST_CASE("mode-of-variation output") {
  TempDir dir;
  const auto traj = dir.file("t.csv");
  const auto model_path = dir.file("m.json");
  const auto modes = dir.file("modes.csv");
  REQUIRE(run("simulate --manifold sphere:2 --n 15 --m 8 --seed 3 --out " + traj) == 0);
  REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 2 --out " + model_path) == 0);
  REQUIRE(run("reconstruct --model " + model_path + " --mode 1 --out " + modes) == 0);
  const auto curves = ingest_trajectories_csv(modes, make_sphere(2));
  REQUIRE(curves.size() == 3);
  CHECK(curves[0].subject_id == "mean");
  CHECK(curves[1].subject_id == "mode1+");
  CHECK(curves[2].subject_id == "mode1-");

  // The plus curve sits 3*sqrt(lambda_1)*||phi_1|| away in the tangent space.
  const auto model = read_model_json(model_path);
  const auto spec = make_sphere(2);
  for (std::size_t j = 0; j < model.grid.size(); ++j) {
    const double expected =
        3.0 * std::sqrt(model.eigenvalues[0]) * vm::norm(model.eigenfunctions[0][j]);
    CHECK(geodesic_distance(spec, curves[1].points[j], model.mean_curve[j]) ==
          Catch::Approx(expected).margin(1e-9));
  }
}

TEST_CASE("reference-scale fit through the cli") {
  // The n=100, m=20 design: single-seed K=1 FVE swings by +-5 points, so
  // average the table entry over a few seeds; it lands in the reference
  // neighborhood, and gamma = 0.95 selects three components in most runs.
  TempDir dir;
  const int seeds = 5;
  double mean_fve1 = 0.0;
  int kstar3 = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto traj = dir.file("t" + std::to_string(seed) + ".csv");
    const auto model_path = dir.file("m" + std::to_string(seed) + ".json");
    REQUIRE(run("simulate --manifold sphere:2 --n 100 --m 20 --seed " +
                std::to_string(seed) + " --out " + traj) == 0);
    const auto fit_out = dir.file("fit" + std::to_string(seed) + ".txt");
    REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 4 --gamma 0.95 --out " +
                model_path, fit_out) == 0);
    const auto text = read_file(fit_out);
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::istringstream fields(line);
      std::string k;
      double uk = 0.0, fve = 0.0;
      if (fields >> k >> uk >> fve && k == "1") mean_fve1 += 100.0 * fve / seeds;
    }
    if (text.find("K* = 3") != std::string::npos) ++kstar3;
  }
  CHECK(mean_fve1 >= 71.0);
  CHECK(mean_fve1 <= 77.0);
  CHECK(kstar3 >= 3);
}

TEST_CASE("fve table with the l2 baseline") {
  TempDir dir;
  const auto traj = dir.file("t.csv");
  const auto model_path = dir.file("m.json");
  REQUIRE(run("simulate --manifold sphere:2 --n 25 --m 10 --seed 5 --out " + traj) == 0);
  REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 4 --out " + model_path) == 0);
  const auto table = dir.file("fve.txt");
  REQUIRE(run("fve --model " + model_path + " --input " + traj + " --baseline l2", table) == 0);
  const auto text = read_file(table);
  CHECK(text.find("FVE(rfpca)") != std::string::npos);
  CHECK(text.find("FVE(l2)") != std::string::npos);

  const auto chart_table = dir.file("fve_chart.txt");
  REQUIRE(run("fve --model " + model_path + " --input " + traj +
              " --baseline l2 --l2-chart lonlat", chart_table) == 0);
  CHECK(read_file(chart_table).find("FVE(l2)") != std::string::npos);
}

TEST_CASE("compositional pipeline through the cli") {
  TempDir dir;
  const auto counts = dir.file("counts.csv");
  {
    std::ofstream out(counts);
    out << "id,t,c1,c2,c3\n";
    for (int id = 0; id < 4; ++id)
      for (int day = 0; day <= 10; ++day) {
        const double t = day;
        const double c1 = 4.0 + id + 0.2 * t;
        const double c2 = 6.0 - 0.1 * t + 0.5 * id;
        const double c3 = 2.0 + 0.05 * t * t;
        out << "f" << id << ',' << t << ',' << c1 << ',' << c2 << ',' << c3 << "\n";
      }
  }
  const auto traj = dir.file("sphere.csv");
  REQUIRE(run("compositional --counts " + counts + " --bandwidth 2.5 --grid 9 --out " + traj) ==
          0);
  const auto samples = ingest_trajectories_csv(traj, make_sphere(2));
  REQUIRE(samples.size() == 4);
  for (const auto& s : samples)
    for (const auto& p : s.points) {
      CHECK(std::abs(vm::norm(p.coords) - 1.0) < 1e-9);
      for (double c : p.coords) CHECK(c >= 0.0);
    }

  const auto model_path = dir.file("comp_model.json");
  REQUIRE(run("fit --manifold sphere:2 --input " + traj +
              " --kmax 3 --compositional --out " + model_path) == 0);
  const auto rec = dir.file("rec.csv");
  REQUIRE(run("reconstruct --model " + model_path + " --K 2 --out " + rec) == 0);
  CHECK(fs::exists(dir.file("rec.composition.csv")));
  const auto comps = read_proportions_csv(dir.file("rec.composition.csv"));
  REQUIRE(comps.size() == 4);
  for (const auto& c : comps)
    for (const auto& row : c.proportions) {
      double sum = 0.0;
      for (double v : row) sum += v;
      CHECK(sum == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("exit codes") {
  TempDir dir;
  // 4: missing input file.
  CHECK(run("fit --manifold sphere:2 --input " + dir.file("nope.csv") +
            " --kmax 2 --out " + dir.file("m.json")) == 4);
  // 2: validation error (bad gamma).
  const auto traj = dir.file("t.csv");
  REQUIRE(run("simulate --manifold sphere:2 --n 4 --m 5 --seed 1 --out " + traj) == 0);
  CHECK(run("fit --manifold sphere:2 --input " + traj + " --kmax 2 --gamma 1.5 --out " +
            dir.file("m.json")) == 2);
  // 2: unknown manifold string.
  CHECK(run("simulate --manifold torus --n 2 --m 4 --seed 1 --out " + dir.file("x.csv")) == 2);
  // 2: K out of range in reconstruct.
  REQUIRE(run("fit --manifold sphere:2 --input " + traj + " --kmax 2 --out " +
              dir.file("m.json")) == 0);
  CHECK(run("reconstruct --model " + dir.file("m.json") + " --K 7 --out " +
            dir.file("r.csv")) == 2);
  // 2: bad usage (missing required option).
  CHECK(run("fit --manifold sphere:2") == 2);
  // 0: help text.
  CHECK(run("--help") == 0);
}

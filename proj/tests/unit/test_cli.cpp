#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specsel/cli/commands.hpp"
#include "specsel/io/dataset_source.hpp"
#include "specsel/select/compare.hpp"
#include "specsel/select/ranking.hpp"
#include "specsel/service/service.hpp"
#include "synthetic.hpp"

using namespace specsel;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("specsel-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "specsel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

fs::path small_grid(const TempDir& dir) {
  return write(dir.path / "grid.csv", "c,gamma,epsilon\n1,0.25,0.1\n10,0.25,0.1\n");
}

FeatureTable ingested(const std::string& csv, const std::string& target = "biomass") {
  std::istringstream in(csv);
  return ingest_feature_csv(in, target).table;
}

ModelConfig grid_model(const fs::path& grid) {
  ServiceConfig c;
  c.grid_file = grid;
  return model_config_for(c);
}

}  // namespace

TEST_CASE("usage errors exit 1, help exits 0") {
  CHECK(cli({}).status == kExitUsage);
  CHECK(cli({"plot"}).status == kExitUsage);
  CHECK(cli({"regress", "--out", "x"}).status == kExitUsage);  // --input missing
  auto help = cli({"--help"});
  CHECK(help.status == kExitOk);
  CHECK(help.out.find("dendrogram_order.txt") != std::string::npos);
  CHECK(help.out.find("bench.csv") != std::string::npos);
}

TEST_CASE("empty or unreadable input is a usage error") {
  TempDir dir;
  auto empty = write(dir.path / "empty.csv", "");
  CHECK(cli({"correlate", "--input", empty.string(), "--target", "y", "--out", (dir.path / "o").string()}).status ==
        kExitUsage);
  CHECK(cli({"correlate", "--input", (dir.path / "nope.csv").string(), "--target", "y", "--out",
             (dir.path / "o").string()})
            .status == kExitUsage);
  auto csv = write(dir.path / "t.csv", synth::to_csv(synth::nonlinear(30, 3, 1)));
  CHECK(cli({"correlate", "--input", csv.string(), "--out", (dir.path / "o").string()}).status == kExitUsage);
}

TEST_CASE("unwritable output is a runtime failure") {
  TempDir dir;
  auto csv = write(dir.path / "t.csv", synth::to_csv(synth::nonlinear(30, 3, 1)));
  write(dir.path / "blocker", "file, not a directory");
  auto r = cli({"correlate", "--input", csv.string(), "--target", "biomass", "--out",
                (dir.path / "blocker" / "sub").string()});
  CHECK(r.status == kExitRuntime);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("correlate writes the same document as the service") {
  TempDir dir;
  const std::string text = synth::to_csv(synth::nonlinear(50, 5, 2));
  auto csv = write(dir.path / "t.csv", text);
  auto out = dir.path / "out";
  auto r = cli({"correlate", "--input", csv.string(), "--target", "biomass", "--out", out.string()});
  REQUIRE(r.status == kExitOk);

  ServiceConfig cfg;
  cfg.data_dir = dir.path / "svc";
  Service service(cfg);
  auto up = service.handle({"POST", "/datasets", {}, json{{"kind", "features"}, {"csv", text}, {"target", "biomass"}}.dump()});
  REQUIRE(up.status == 201);
  const std::string id = json::parse(up.body)["dataset_id"];
  CHECK(slurp(out / "correlation.json") == service.handle({"GET", "/datasets/" + id + "/correlation", {}, ""}).body);

  const json doc = json::parse(slurp(out / "correlation.json"));
  std::istringstream lines(slurp(out / "dendrogram_order.txt"));
  std::vector<std::string> order;
  for (std::string l; std::getline(lines, l);) order.push_back(l);
  REQUIRE(order.size() == 6);
  for (std::size_t i = 0; i < order.size(); ++i)
    CHECK(order[i] == doc["matrix"]["labels"][doc["dendrogram"]["leaf_order"][i].get<std::size_t>()]);

  // The CSV matrix carries the exact values.
  std::istringstream mat(slurp(out / "correlation.csv"));
  std::string header;
  std::getline(mat, header);
  CHECK(header == "label,f0,f1,f2,f3,f4,biomass");
  for (std::size_t row = 0; row < 6; ++row) {
    std::string line;
    std::getline(mat, line);
    std::stringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    for (std::size_t c = 0; c < 6; ++c) {
      std::getline(cells, cell, ',');
      CHECK(std::stod(cell) == doc["matrix"]["values"][row][c].get<double>());
    }
  }

  auto again = dir.path / "again";
  REQUIRE(cli({"correlate", "--input", csv.string(), "--target", "biomass", "--out", again.string()}).status == 0);
  for (auto f : {"correlation.json", "correlation.csv", "dendrogram_order.txt"})
    CHECK(slurp(out / f) == slurp(again / f));
}

TEST_CASE("regress equals library kfold_cv and prints R2 to 4 decimals") {
  TempDir dir;
  const std::string text = synth::to_csv(synth::nonlinear(60, 4, 3));
  auto csv = write(dir.path / "t.csv", text);
  auto grid = small_grid(dir);
  auto out = dir.path / "out";
  auto r = cli({"regress", "--input", csv.string(), "--target", "biomass", "--k", "4", "--seed", "17",
                "--grid-file", grid.string(), "--select", "f2,f0", "--out", out.string()});
  REQUIRE(r.status == kExitOk);

  const auto table = ingested(text).with_features({"f0", "f2"});
  const auto direct = kfold_cv(table, 4, 17, grid_model(grid));
  CHECK(slurp(out / "report.json") == dump(json(direct)));
  char r2[32];
  std::snprintf(r2, sizeof r2, "r2 %.4f", direct.aggregate.r2);
  CHECK(r.out.find(r2) != std::string::npos);

  std::istringstream pred(slurp(out / "predictions.csv"));
  std::string line;
  std::getline(pred, line);
  CHECK(line == "row,fold,truth,prediction");
  std::size_t rows = 0;
  while (std::getline(pred, line)) {
    std::stringstream cells(line);
    std::string id, fold, truth, p;
    std::getline(cells, id, ',');
    std::getline(cells, fold, ',');
    std::getline(cells, truth, ',');
    std::getline(cells, p, ',');
    CHECK(id == "s" + std::to_string(rows));
    CHECK(std::stoul(fold) == direct.fold_plan.assignments[rows]);
    CHECK(std::stod(truth) == direct.truth[rows]);
    CHECK(std::stod(p) == direct.predictions[rows]);
    ++rows;
  }
  CHECK(rows == 60);

  auto again = dir.path / "again";
  cli({"regress", "--input", csv.string(), "--target", "biomass", "--k", "4", "--seed", "17", "--grid-file",
       grid.string(), "--select", "f2,f0", "--out", again.string()});
  CHECK(slurp(out / "report.json") == slurp(again / "report.json"));
  CHECK(slurp(out / "predictions.csv") == slurp(again / "predictions.csv"));

  CHECK(cli({"regress", "--input", csv.string(), "--target", "biomass", "--select", "f9", "--out", out.string()})
            .status == kExitUsage);
  CHECK(cli({"regress", "--input", csv.string(), "--target", "biomass", "--k", "40", "--out", out.string()}).status ==
        kExitUsage);
  CHECK(cli({"regress", "--input", csv.string(), "--target", "biomass", "--model", "forest", "--out", out.string()})
            .status == kExitUsage);
}

TEST_CASE("regress with the ridge model") {
  TempDir dir;
  const std::string text = synth::to_csv(synth::nonlinear(40, 3, 4));
  auto csv = write(dir.path / "t.csv", text);
  auto out = dir.path / "out";
  REQUIRE(cli({"regress", "--input", csv.string(), "--target", "biomass", "--model", "ridge", "--out", out.string()})
              .status == 0);
  ModelConfig ridge;
  ridge.kind = ModelKind::ridge;
  CHECK(slurp(out / "report.json") == dump(json(kfold_cv(ingested(text), 5, 42, ridge))));
}

TEST_CASE("autoselect outputs and m validation") {
  TempDir dir;
  const std::string text = synth::to_csv(synth::three_planted(60, 6, 5));
  auto csv = write(dir.path / "t.csv", text);
  auto grid = small_grid(dir);
  auto out = dir.path / "out";
  auto base = std::vector<std::string>{"autoselect", "--input", csv.string(), "--target", "biomass", "--k", "3",
                                       "--seed", "2", "--grid-file", grid.string(), "--out", out.string()};
  auto with_m = [&](const std::string& m) {
    auto a = base;
    a.push_back("--m");
    a.push_back(m);
    return a;
  };
  REQUIRE(cli(with_m("3")).status == kExitOk);
  const auto table = ingested(text);
  const auto model = grid_model(grid);
  const auto picked = auto_select(table, 3, 3, 2, model);
  const auto cmp = compare_subset_vs_full(table, picked.feature_set, 3, 2, model);
  std::string names;
  for (const auto& n : picked.feature_set.selected) names += n + "\n";
  CHECK(slurp(out / "feature_set.txt") == names);
  CHECK(slurp(out / "ranking.json") == dump(json(picked.ranking)));
  CHECK(slurp(out / "comparison.json") == dump(json(cmp.row)));
  CHECK(slurp(out / "report.json") == dump(json(cmp.subset_report)));

  REQUIRE(cli(with_m("6")).status == kExitOk);
  CHECK(slurp(out / "feature_set.txt") == "f0\nf1\nf2\nf3\nf4\nf5\n");
  CHECK(cli(with_m("0")).status == kExitUsage);
  CHECK(cli(with_m("7")).status == kExitUsage);
  CHECK(cli(with_m("two")).status == kExitUsage);
  CHECK(cli(base).status == kExitUsage);  // --m is required
}

TEST_CASE("autoselect can use the dual-objective criterion") {
  TempDir dir;
  const std::string text = synth::to_csv(synth::three_planted(50, 5, 6));
  auto csv = write(dir.path / "t.csv", text);
  auto grid = small_grid(dir);
  auto out = dir.path / "out";
  REQUIRE(cli({"autoselect", "--input", csv.string(), "--target", "biomass", "--k", "3", "--m", "2",
               "--grid-file", grid.string(), "--rfe-criterion", "dual", "--out", out.string()})
              .status == 0);
  auto model = grid_model(grid);
  model.rfe_criterion = RfeCriterion::dual_objective;
  CHECK(slurp(out / "ranking.json") == dump(json(auto_select(ingested(text), 2, 3, 42, model).ranking)));
  CHECK(cli({"autoselect", "--input", csv.string(), "--target", "biomass", "--m", "2", "--rfe-criterion", "abs",
             "--out", out.string()})
            .status == kExitUsage);
}

TEST_CASE("bench: single seed equals regress, repeated seeds average to the single value") {
  TempDir dir;
  const std::string text = synth::to_csv(synth::nonlinear(40, 3, 7));
  auto csv = write(dir.path / "t.csv", text);
  auto grid = small_grid(dir);
  auto reg = dir.path / "reg";
  auto bench = dir.path / "bench";
  REQUIRE(cli({"regress", "--input", csv.string(), "--target", "biomass", "--seed", "5", "--grid-file", grid.string(),
               "--out", reg.string()})
              .status == 0);
  REQUIRE(cli({"bench", "--input", csv.string(), "--target", "biomass", "--seeds", "5", "--grid-file", grid.string(),
               "--out", bench.string()})
              .status == 0);
  const double regress_r2 = json::parse(slurp(reg / "report.json"))["aggregate"]["r2"];
  const json b = json::parse(slurp(bench / "bench.json"));
  CHECK(b["svr"]["r2"][0].get<double>() == regress_r2);

  REQUIRE(cli({"bench", "--input", csv.string(), "--target", "biomass", "--seeds", "5,5,5", "--grid-file",
               grid.string(), "--out", bench.string()})
              .status == 0);
  const json b3 = json::parse(slurp(bench / "bench.json"));
  CHECK(b3["svr"]["mean_r2"].get<double>() == doctest::Approx(regress_r2).epsilon(1e-15));
  CHECK(b3["ridge"]["mean_r2"].get<double>() == doctest::Approx(b["ridge"]["mean_r2"].get<double>()).epsilon(1e-15));
  CHECK(slurp(bench / "bench.csv").rfind("seed,svr_r2,ridge_r2\n5,", 0) == 0);

  REQUIRE(cli({"bench", "--input", csv.string(), "--target", "biomass", "--seeds", "1-3,9", "--grid-file",
               grid.string(), "--out", bench.string()})
              .status == 0);
  CHECK(json::parse(slurp(bench / "bench.json"))["seeds"] == json::array({1, 2, 3, 9}));
  for (auto bad : {"", "3-1", "a", "1,,2", "-4"})
    CHECK(cli({"bench", "--input", csv.string(), "--target", "biomass", "--seeds", bad, "--out", bench.string()})
              .status == kExitUsage);
}

TEST_CASE("reflectance input computes the registry's indices") {
  TempDir dir;
  const std::string text = synth::reflectance_csv(20, 3);
  auto csv = write(dir.path / "r.csv", text);
  auto out = dir.path / "out";
  REQUIRE(cli({"correlate", "--input", csv.string(), "--registry", "default", "--out", out.string()}).status == 0);
  const json doc = json::parse(slurp(out / "correlation.json"));
  std::istringstream in(text);
  const auto table = compute_indices(ingest_reflectance_csv(in).dataset, IndexRegistry::standard()).table;
  CHECK(doc["matrix"]["labels"].size() == table.d() + 1);
  CHECK(doc["matrix"]["labels"].back() == "biomass");

  auto reg = write(dir.path / "two.txt", "# two indices\nND  (R800 - R670) / (R800 + R670)\nSR R800 / R670\n");
  REQUIRE(cli({"correlate", "--input", csv.string(), "--registry", reg.string(), "--out", out.string()}).status == 0);
  CHECK(json::parse(slurp(out / "correlation.json"))["matrix"]["labels"] == json::array({"ND", "SR", "biomass"}));
  CHECK(cli({"correlate", "--input", csv.string(), "--registry", reg.string(), "--target", "yield", "--out",
             out.string()})
            .status == kExitUsage);
}

TEST_CASE("indices prints the bound registry") {
  auto r = cli({"indices"});
  REQUIRE(r.status == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 36);
  CHECK(r.out.rfind("NDVI\t", 0) == 0);

  TempDir dir;
  auto bad = write(dir.path / "bad.txt", "FAR R1200 / R800\n");
  auto out = dir.path / "out";
  CHECK(cli({"indices", "--registry", bad.string()}).status == kExitUsage);  // 1200 nm is off the grid
  REQUIRE(cli({"indices", "--out", out.string()}).status == 0);
  const json doc = json::parse(slurp(out / "indices.json"));
  CHECK(doc["indices"].size() == 36);
  CHECK(doc["grid"]["count"] == 272);
}

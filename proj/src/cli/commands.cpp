#include "specsel/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specsel/error.hpp"
#include "specsel/io/dataset_source.hpp"
#include "specsel/io/grid_file.hpp"
#include "specsel/io/report_json.hpp"
#include "specsel/select/compare.hpp"
#include "specsel/select/ranking.hpp"

namespace specsel {

namespace {

namespace fs = std::filesystem;

constexpr const char* kFilesHelp = R"(Output files (under --out):
  correlate   correlation.csv      Pearson matrix, labels in input order, target last
              dendrogram_order.txt labels in dendrogram leaf order, one per line
              correlation.json     matrix + dendrogram (same document as the HTTP API)
  regress     report.json          regression report
              predictions.csv      pooled held-out predictions: row,fold,truth,prediction
  autoselect  feature_set.txt      selected features, one per line
              ranking.json         per-fold RFE ranks and scores over all features
              comparison.json      subset vs full-set CV metrics on one fold plan
              report.json          CV report of the selected subset
  bench       bench.csv            seed,svr_r2,ridge_r2 per seed, then a mean row
              bench.json           the same numbers as JSON
  indices     indices.json         registry bound to the band grid (stdout always)

Input: --input is a feature CSV (needs --target) unless --registry is given, in
which case it is a reflectance CSV (sample_id, b<nm>..., target) and the
registry's indices are computed from it. --registry takes a file or "default".
Exit status: 0 success, 1 usage or invalid input, 2 runtime failure.)";

struct Options {
  std::string input;
  std::string registry;
  std::string target;
  std::size_t k = 5;
  std::uint64_t seed = 42;
  std::string seeds = "1-30";
  std::size_t m = 0;
  std::vector<std::string> select;
  std::string grid_file;
  std::string out;
  std::string model = "svr";
  std::string rfe_criterion = "gradient";
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::invalid_argument, "cannot read input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << content;
  if (!out.flush()) fail(ErrorCode::io, "short write to " + path.string());
}

fs::path output_dir(const Options& o) {
  if (o.out.empty()) fail(ErrorCode::invalid_argument, "--out is required");
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (!fs::is_directory(o.out)) fail(ErrorCode::io, "cannot create output directory " + o.out);
  return o.out;
}

std::string registry_text(const std::string& choice) {
  if (choice.empty() || choice == "default") return std::string(default_registry_text());
  return IndexRegistry::load(choice).to_text();
}

struct Input {
  std::string id;
  LoadedDataset data;
};

Input load_input(const Options& o) {
  if (o.input.empty()) fail(ErrorCode::invalid_argument, "--input is required");
  std::string csv = read_file(o.input);
  std::optional<std::string> target;
  if (!o.target.empty()) target = o.target;
  json source;
  if (o.registry.empty()) {
    if (!target) fail(ErrorCode::invalid_argument, "a feature CSV needs --target");
    source = make_dataset_source("features", std::move(csv), target, "",
                                 std::string(default_registry_text()));
  } else {
    source = make_dataset_source("reflectance", std::move(csv), target, "", registry_text(o.registry));
  }
  return {dataset_id(source), load_dataset_source(source)};
}

ModelConfig model_config(const Options& o) {
  ModelConfig m;
  m.kind = parse_model_kind(o.model);
  m.rfe_criterion = parse_rfe_criterion(o.rfe_criterion);
  if (!o.grid_file.empty()) m.svr_grid = load_svr_grid(o.grid_file);
  return m;
}

FeatureTable selected_table(const FeatureTable& table, const std::vector<std::string>& select) {
  if (select.empty()) return table;
  // Keep table column order, whatever order the names were given in.
  const auto fs = FeatureSet::from_selected(table.feature_names, select);
  return table.with_features(fs.selected);
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  auto number = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-')
      fail(ErrorCode::invalid_argument, "--seeds: '" + s + "' is not a seed");
    return v;
  };
  while (std::getline(ss, part, ',')) {
    if (part.empty()) fail(ErrorCode::invalid_argument, "--seeds: empty entry");
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(number(part));
      continue;
    }
    const auto lo = number(part.substr(0, dash));
    const auto hi = number(part.substr(dash + 1));
    if (hi < lo) fail(ErrorCode::invalid_argument, "--seeds: empty range " + part);
    if (hi - lo >= 100000) fail(ErrorCode::invalid_argument, "--seeds: range too long");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) fail(ErrorCode::invalid_argument, "--seeds lists no seeds");
  return seeds;
}

std::string predictions_csv(const RegressionReport& r, const FeatureTable& table) {
  std::string out = "row,fold,truth,prediction\n";
  for (std::size_t i = 0; i < r.truth.size(); ++i) {
    out += table.row_ids.empty() ? std::to_string(i) : table.row_ids[i];
    out += "," + std::to_string(r.fold_plan.assignments[i]) + "," + format_number(r.truth[i]) + "," +
           format_number(r.predictions[i]) + "\n";
  }
  return out;
}

int cmd_correlate(const Options& o, std::ostream& out) {
  const auto input = load_input(o);
  const auto dir = output_dir(o);
  const json payload = correlation_payload(input.id, input.data.table);
  const auto& labels = payload["matrix"]["labels"];
  const auto& values = payload["matrix"]["values"];

  std::string csv = "label";
  for (const auto& l : labels) csv += "," + l.get<std::string>();
  csv += "\n";
  for (std::size_t r = 0; r < labels.size(); ++r) {
    csv += labels[r].get<std::string>();
    for (const auto& v : values[r]) csv += "," + format_number(v.get<double>());
    csv += "\n";
  }
  std::string order;
  for (const auto& leaf : payload["dendrogram"]["leaf_order"])
    order += labels[leaf.get<std::size_t>()].get<std::string>() + "\n";

  write_file(dir / "correlation.csv", csv);
  write_file(dir / "dendrogram_order.txt", order);
  write_file(dir / "correlation.json", dump(payload));
  out << "correlation matrix: " << labels.size() << " labels (" << input.data.table.d()
      << " features + target), dataset " << input.id << "\n";
  return kExitOk;
}

int cmd_regress(const Options& o, std::ostream& out) {
  const auto input = load_input(o);
  const auto table = selected_table(input.data.table, o.select);
  const auto config = model_config(o);
  const auto dir = output_dir(o);
  const auto report = kfold_cv(table, o.k, o.seed, config);
  write_file(dir / "report.json", dump(json(report)));
  write_file(dir / "predictions.csv", predictions_csv(report, table));
  out << "model " << to_string(report.model) << "  features " << table.d() << "  k " << o.k
      << "  seed " << o.seed << "\n";
  out << "r2 " << fixed4(report.aggregate.r2) << "  rmse " << fixed4(report.aggregate.rmse) << "\n";
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_autoselect(const Options& o, std::ostream& out) {
  const auto input = load_input(o);
  const auto& table = input.data.table;
  if (o.m < 1 || o.m > table.d())
    fail(ErrorCode::invalid_argument,
         "--m must be in 1.." + std::to_string(table.d()) + ", got " + std::to_string(o.m));
  const auto config = model_config(o);
  const auto dir = output_dir(o);
  const auto picked = auto_select(table, o.m, o.k, o.seed, config);
  const auto cmp = compare_subset_vs_full(table, picked.feature_set, o.k, o.seed, config);

  std::string names;
  for (const auto& n : picked.feature_set.selected) names += n + "\n";
  write_file(dir / "feature_set.txt", names);
  write_file(dir / "ranking.json", dump(json(picked.ranking)));
  write_file(dir / "comparison.json", dump(json(cmp.row)));
  write_file(dir / "report.json", dump(json(cmp.subset_report)));
  out << "selected " << picked.feature_set.selected.size() << " of " << table.d() << ":";
  for (const auto& n : picked.feature_set.selected) out << " " << n;
  out << "\nsubset r2 " << fixed4(cmp.row.subset.r2) << "  full r2 " << fixed4(cmp.row.full.r2) << "\n";
  return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const auto input = load_input(o);
  const auto table = selected_table(input.data.table, o.select);
  const auto seeds = parse_seeds(o.seeds);
  auto svr = model_config(o);
  svr.kind = ModelKind::svr;
  auto ridge = svr;
  ridge.kind = ModelKind::ridge;
  check_cv_inputs(table, o.k);
  const auto dir = output_dir(o);

  std::vector<double> svr_r2, ridge_r2;
  std::string csv = "seed,svr_r2,ridge_r2\n";
  for (auto seed : seeds) {
    svr_r2.push_back(kfold_cv(table, o.k, seed, svr).aggregate.r2);
    ridge_r2.push_back(kfold_cv(table, o.k, seed, ridge).aggregate.r2);
    csv += std::to_string(seed) + "," + format_number(svr_r2.back()) + "," +
           format_number(ridge_r2.back()) + "\n";
  }
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  csv += "mean," + format_number(mean(svr_r2)) + "," + format_number(mean(ridge_r2)) + "\n";
  const json doc{{"k", o.k},
                 {"seeds", seeds},
                 {"features", table.feature_names},
                 {"svr", {{"r2", svr_r2}, {"mean_r2", mean(svr_r2)}}},
                 {"ridge", {{"r2", ridge_r2}, {"mean_r2", mean(ridge_r2)}}}};
  write_file(dir / "bench.csv", csv);
  write_file(dir / "bench.json", dump(doc));
  out << "seeds " << seeds.size() << "  k " << o.k << "  features " << table.d() << "\n";
  out << "mean r2  svr " << fixed4(mean(svr_r2)) << "  ridge " << fixed4(mean(ridge_r2)) << "\n";
  return kExitOk;
}

int cmd_indices(const Options& o, std::ostream& out) {
  const auto registry = IndexRegistry::parse(registry_text(o.registry));
  BandGrid grid = BandGrid::standard();
  if (!o.input.empty()) {
    std::istringstream in(read_file(o.input));
    grid = ingest_reflectance_csv(in).dataset.grid;
  }
  const json bound = registry_json(registry, grid);
  for (const auto& def : bound) {
    out << def["name"].get<std::string>() << "\t" << def["expression"].get<std::string>() << "\t";
    bool first = true;
    for (const auto& w : def["wavelengths"]) {
      out << (first ? "" : ",") << format_number(w.get<double>());
      first = false;
    }
    out << "\n";
  }
  if (!o.out.empty())
    write_file(output_dir(o) / "indices.json",
               dump(json{{"grid", grid}, {"indices", bound}}));
  return kExitOk;
}

void add_input(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "feature or reflectance CSV")->required();
  sub->add_option("--registry", o.registry, "index registry file or \"default\" (reflectance input)");
  sub->add_option("--target", o.target, "target column of a feature CSV");
}

void add_cv(CLI::App* sub, Options& o) {
  sub->add_option("--k", o.k, "fold count")->capture_default_str()->check(CLI::Range(2, 1000));
  sub->add_option("--grid-file", o.grid_file, "SVR grid CSV with columns c,gamma,epsilon")
      ->check(CLI::ExistingFile);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"specsel: vegetation-index correlation, regression and feature selection"};
  app.footer(kFilesHelp);
  app.require_subcommand(1);

  auto* correlate = app.add_subcommand("correlate", "correlation matrix and dendrogram order");
  add_input(correlate, o);
  correlate->add_option("--out", o.out, "output directory")->required();

  auto* regress = app.add_subcommand("regress", "k-fold cross-validated regression");
  add_input(regress, o);
  add_cv(regress, o);
  regress->add_option("--seed", o.seed, "fold-plan seed")->capture_default_str();
  regress->add_option("--select", o.select, "features to use (comma separated); default all")
      ->delimiter(',');
  regress->add_option("--model", o.model, "svr or ridge")
      ->capture_default_str()
      ->check(CLI::IsMember({"svr", "ridge"}));
  regress->add_option("--out", o.out, "output directory")->required();

  auto* autoselect = app.add_subcommand("autoselect", "RFE ranking, top-m subset and comparison");
  add_input(autoselect, o);
  add_cv(autoselect, o);
  autoselect->add_option("--seed", o.seed, "fold-plan seed")->capture_default_str();
  autoselect->add_option("--m", o.m, "number of features to keep")->required();
  autoselect->add_option("--rfe-criterion", o.rfe_criterion, "gradient or dual")
      ->capture_default_str()
      ->check(CLI::IsMember({"gradient", "dual"}));
  autoselect->add_option("--out", o.out, "output directory")->required();

  auto* bench = app.add_subcommand("bench", "SVR vs ridge mean R^2 over many fold plans");
  add_input(bench, o);
  add_cv(bench, o);
  bench->add_option("--seeds", o.seeds, "seed list, e.g. 1-30 or 1,4,9")->capture_default_str();
  bench->add_option("--select", o.select, "features to use (comma separated); default all")
      ->delimiter(',');
  bench->add_option("--out", o.out, "output directory")->required();

  auto* indices = app.add_subcommand("indices", "print the index registry bound to a band grid");
  indices->add_option("--registry", o.registry, "registry file or \"default\"");
  indices->add_option("--input", o.input, "reflectance CSV whose band grid to bind to");
  indices->add_option("--out", o.out, "output directory for indices.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*correlate) return cmd_correlate(o, out);
    if (*regress) return cmd_regress(o, out);
    if (*autoselect) return cmd_autoselect(o, out);
    if (*bench) return cmd_bench(o, out);
    return cmd_indices(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::invalid_argument:
      case ErrorCode::parse:
      case ErrorCode::out_of_range:
      case ErrorCode::not_found:
        return kExitUsage;
      default:
        return kExitRuntime;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace specsel

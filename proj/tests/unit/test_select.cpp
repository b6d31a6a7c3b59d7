#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "synthetic.hpp"
#include "specsel/error.hpp"
#include "specsel/regress/ridge.hpp"
#include "specsel/select/compare.hpp"
#include "specsel/select/feature_set.hpp"
#include "specsel/select/ranking.hpp"
#include "specsel/select/wavelengths.hpp"
#include "specsel/spectra/index_registry.hpp"

using namespace specsel;

namespace {

RankList random_permutation(std::size_t d, std::mt19937_64& rng) {
  RankList r(d);
  std::iota(r.begin(), r.end(), std::size_t{1});
  std::shuffle(r.begin(), r.end(), rng);
  return r;
}

std::vector<std::string> names(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

}  // namespace

TEST_SUITE("ranking score") {
  TEST_CASE("examples") {
    CHECK(ranking_score(std::vector<RankList>{{1, 2, 3}}, 3, 1)[0] == 1.0);
    CHECK(ranking_score(std::vector<RankList>{{3, 2, 1}}, 3, 1)[0] == 0.0);
    std::vector<RankList> two{{1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}};
    CHECK(ranking_score(two, 5, 2)[0] == 0.5);
    CHECK(ranking_score(std::vector<RankList>{{1}}, 1, 1)[0] == 1.0);
  }

  TEST_CASE("literal re-evaluation on random permutations") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 50; ++t) {
      const std::size_t k = 4, d = 10;
      std::vector<RankList> ranks;
      for (std::size_t i = 0; i < k; ++i) ranks.push_back(random_permutation(d, rng));
      auto s = ranking_score(ranks, d, k);
      for (std::size_t f = 0; f < d; ++f) {
        double sum = 0;
        for (std::size_t i = 0; i < k; ++i) sum += ((double(d) + 1 - double(ranks[i][f])) - 1) / (double(d) - 1);
        CHECK(std::abs(s[f] - sum / double(k)) <= 1e-15);
        CHECK(s[f] >= 0.0);
        CHECK(s[f] <= 1.0);
      }
    }
  }

  TEST_CASE("strictly decreasing in each fold rank") {
    std::mt19937_64 rng(78);
    const std::size_t d = 6;
    std::vector<RankList> ranks{random_permutation(d, rng), random_permutation(d, rng)};
    const auto before = ranking_score(ranks, d, 2);
    // Swap the feature ranked 2 with the one ranked 3 in fold 0.
    auto& r0 = ranks[0];
    const auto a = std::find(r0.begin(), r0.end(), 2u) - r0.begin();
    const auto b = std::find(r0.begin(), r0.end(), 3u) - r0.begin();
    std::swap(r0[a], r0[b]);
    const auto after = ranking_score(ranks, d, 2);
    CHECK(after[a] < before[a]);
    CHECK(after[b] > before[b]);
  }

  TEST_CASE("malformed rank lists") {
    CHECK_THROWS(ranking_score(std::vector<RankList>{{1, 1, 3}}, 3, 1));
    CHECK_THROWS(ranking_score(std::vector<RankList>{{1, 2}}, 3, 1));
    CHECK_THROWS(ranking_score(std::vector<RankList>{{1, 2, 4}}, 3, 1));
    CHECK_THROWS(ranking_score(std::vector<RankList>{{1, 2, 3}}, 3, 2));
    CHECK_THROWS(ranking_score(std::vector<RankList>{}, 3, 0));
  }
}

TEST_SUITE("rfe") {
  TEST_CASE("single feature") {
    auto t = synth::single_planted(30, 1, 0, 1);
    auto r = rfe_rank(t.values, t.target, SvrHyperParams{});
    CHECK(r.ranks == RankList{1});
  }

  TEST_CASE("output is a permutation for both criteria and both modes") {
    auto t = synth::random_table(40, 7, 4);
    for (auto criterion : {RfeCriterion::gradient, RfeCriterion::dual_objective})
      for (bool retrain : {true, false}) {
        auto r = rfe_rank(t.values, t.target, SvrHyperParams{1, 0.2, 0.1}, {retrain, criterion, {}});
        auto sorted = r.ranks;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < 7; ++i) CHECK(sorted[i] == i + 1);
        CHECK(r.elimination_order.size() == 7);
        CHECK(r.ranks[r.elimination_order.front()] == 7);
        CHECK(r.ranks[r.elimination_order.back()] == 1);
      }
  }

  TEST_CASE("planted feature ranks first") {
    ModelConfig cfg;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto t = synth::single_planted(200, 5, seed % 5, seed);
      auto r = rfe_rank(t.values, t.target, cfg, seed);
      hits += r.ranks[seed % 5] == 1;
    }
    CHECK(hits >= 18);
  }

  TEST_CASE("duplicated informative column: one copy goes early, the other survives") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto t = synth::single_planted(150, 6, 0, seed);
      for (std::size_t i = 0; i < t.n(); ++i) t.values(i, 5) = t.values(i, 0);
      auto r = rfe_rank(t.values, t.target, SvrHyperParams{10, 1.0 / 6, 0.05});
      const auto lo = std::min(r.ranks[0], r.ranks[5]);
      const auto hi = std::max(r.ranks[0], r.ranks[5]);
      ok += lo <= 3 && hi > lo;
      CHECK(lo <= 3);
    }
    CHECK(ok == 10);
  }

  TEST_CASE("dual-objective criterion picks the column a direct double sum picks") {
    auto t = synth::three_planted(60, 4, 3);
    SvrHyperParams p{10, 0.25, 0.1};
    auto model = train_svr(t.values, t.target, p);
    const auto& s = model.support;
    const auto& b = model.dual_coefficients;
    auto w = [&](std::optional<std::size_t> skip) {
      double acc = 0;
      for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.rows(); ++j) {
          double dist = 0;
          for (std::size_t f = 0; f < s.cols(); ++f)
            if (f != skip) dist += (s(i, f) - s(j, f)) * (s(i, f) - s(j, f));
          acc += b[i] * b[j] * std::exp(-p.gamma * dist);
        }
      return -0.5 * acc;
    };
    const double full = w(std::nullopt);
    std::size_t want = 0;
    double best = INFINITY;
    for (std::size_t f = 0; f < 4; ++f) {
      const double change = std::abs(full - w(f));
      if (change < best) {
        best = change;
        want = f;
      }
    }
    auto r = rfe_rank(t.values, t.target, p, {false, RfeCriterion::dual_objective, {}});
    CHECK(r.elimination_order.front() == want);
  }

  TEST_CASE("gradient criterion picks the column a finite difference picks") {
    auto t = synth::three_planted(60, 4, 5);
    SvrHyperParams p{10, 0.25, 0.1};
    auto model = train_svr(t.values, t.target, p);
    std::vector<double> sens(4, 0.0);
    const double h = 1e-5;
    for (std::size_t f = 0; f < 4; ++f) {
      Matrix up = t.values, down = t.values;
      for (std::size_t i = 0; i < t.n(); ++i) {
        up(i, f) += h * model.scaling.scale[f];
        down(i, f) -= h * model.scaling.scale[f];
      }
      auto a = predict_svr(model, up), c = predict_svr(model, down);
      for (std::size_t i = 0; i < t.n(); ++i) sens[f] += std::pow((a[i] - c[i]) / (2 * h), 2);
    }
    const auto want = std::min_element(sens.begin(), sens.end()) - sens.begin();
    auto r = rfe_rank(t.values, t.target, p, {false, RfeCriterion::gradient, {}});
    CHECK(r.elimination_order.front() == std::size_t(want));
  }

  TEST_CASE("linear data, linear-behaving kernel: agrees with ridge on the top five") {
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> g;
      auto t = synth::make_table(120, 8);
      const double w[8] = {3.0, -2.4, 1.9, -1.4, 1.0, 0.3, 0.1, 0.0};
      for (std::size_t i = 0; i < t.n(); ++i) {
        double y = 0;
        for (std::size_t j = 0; j < 8; ++j) {
          t.values(i, j) = g(rng);
          y += w[j] * t.values(i, j);
        }
        t.target[i] = y + 0.2 * g(rng);
      }
      auto ridge = train_ridge(t.values, t.target, 1.0);
      std::vector<std::size_t> by_ridge(8);
      std::iota(by_ridge.begin(), by_ridge.end(), std::size_t{0});
      std::vector<double> mag(8);
      for (std::size_t j = 0; j < 8; ++j) {
        auto col = t.values.column(j);
        double m = 0, v = 0;
        for (double x : col) m += x / double(col.size());
        for (double x : col) v += (x - m) * (x - m) / double(col.size());
        mag[j] = std::abs(ridge.weights[j]) * std::sqrt(v);
      }
      std::stable_sort(by_ridge.begin(), by_ridge.end(), [&](auto a, auto b) { return mag[a] > mag[b]; });
      auto r = rfe_rank(t.values, t.target, SvrHyperParams{100, 1e-3, 0.05});
      std::set<std::size_t> top_ridge(by_ridge.begin(), by_ridge.begin() + 5), top_rfe;
      for (std::size_t j = 0; j < 8; ++j)
        if (r.ranks[j] <= 5) top_rfe.insert(j);
      std::size_t common = 0;
      for (auto j : top_rfe) common += top_ridge.count(j);
      agree += common >= 4;
    }
    CHECK(agree == 20);
  }
}

TEST_SUITE("rank_with_cv and auto_select") {
  TEST_CASE("planted feature scores high with k = 2") {
    ModelConfig cfg;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto t = synth::single_planted(120, 5, 2, seed);
      auto r = rank_with_cv(t, 2, seed, cfg);
      CHECK(r.k == 2);
      CHECK(r.d == 5);
      hits += r.scores[2] >= 0.8;
      CHECK(*std::max_element(r.scores.begin(), r.scores.end()) <= 1.0);
      CHECK(*std::min_element(r.scores.begin(), r.scores.end()) >= 0.0);
    }
    CHECK(hits >= 18);
  }

  TEST_CASE("scores attain a max and a min over random tables") {
    ModelConfig cfg;
    cfg.svr_grid = {{1, 0.2, 0.1}};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto t = synth::random_table(30, 5, seed);
      auto r = rank_with_cv(t, 3, seed, cfg);
      CHECK(*std::max_element(r.scores.begin(), r.scores.end()) >
            *std::min_element(r.scores.begin(), r.scores.end()));
      for (const auto& ranks : r.per_fold_ranks) CHECK(ranks.size() == 5);
    }
  }

  TEST_CASE("identical training splits give identical ranks") {
    // Two halves holding the same rows: both training splits are the same data.
    auto half = synth::single_planted(30, 4, 1, 3);
    auto t = synth::make_table(60, 4);
    FoldPlan plan{2, 0, std::vector<std::size_t>(60)};
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = 0; j < 4; ++j) t.values(i, j) = half.values(i % 30, j);
      t.target[i] = half.target[i % 30];
      plan.assignments[i] = i < 30 ? 0 : 1;
    }
    ModelConfig cfg;
    cfg.svr_grid = {{10, 0.25, 0.05}};
    auto r = rank_with_cv(t, plan, cfg);
    CHECK(r.per_fold_ranks[0] == r.per_fold_ranks[1]);
  }

  TEST_CASE("evaluate_and_rank reports what kfold_cv and rank_with_cv report") {
    auto t = synth::three_planted(60, 5, 9);
    ModelConfig cfg;
    cfg.svr_grid = {{1, 0.2, 0.1}, {10, 0.2, 0.1}};
    auto plan = make_fold_plan(60, 3, 4);
    auto both = evaluate_and_rank(t, plan, cfg);
    auto report = kfold_cv(t, plan, cfg);
    auto ranking = rank_with_cv(t, plan, cfg);
    CHECK(both.report.predictions == report.predictions);
    CHECK(both.ranking.per_fold_ranks == ranking.per_fold_ranks);
    CHECK(both.report.feature_ranking_scores == ranking.scores);
  }

  TEST_CASE("select_top ties keep column order") {
    FeatureRanking r;
    r.feature_names = names({"a", "b", "c", "d"});
    r.scores = {0.5, 0.9, 0.5, 0.1};
    r.d = 4;
    auto fs = select_top(r, 2);
    CHECK(fs.selected == names({"a", "b"}));
    CHECK(fs.unselected == names({"c", "d"}));
    CHECK(select_top(r, 4).selected == r.feature_names);
    CHECK_THROWS(select_top(r, 0));
    CHECK_THROWS(select_top(r, 5));
  }

  TEST_CASE("auto_select m = d, m = 1 and idempotence") {
    ModelConfig cfg;
    auto t = synth::single_planted(100, 4, 3, 2);
    auto all = auto_select(t, 4, 3, 1, cfg);
    CHECK(all.feature_set.selected == t.feature_names);
    CHECK(all.feature_set.unselected.empty());
    auto again = auto_select(t, 4, 3, 1, cfg);
    CHECK(all.feature_set == again.feature_set);
    CHECK(all.ranking.scores == again.ranking.scores);
    CHECK_THROWS(auto_select(t, 0, 3, 1, cfg));
    CHECK_THROWS(auto_select(t, 5, 3, 1, cfg));
  }

  TEST_CASE("auto_select m = 1 finds the planted feature") {
    ModelConfig cfg;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto t = synth::single_planted(120, 5, 1, seed + 100);
      hits += auto_select(t, 1, 3, seed, cfg).feature_set.selected == names({"f1"});
    }
    CHECK(hits >= 18);
  }
}

TEST_SUITE("compare") {
  TEST_CASE("all selected gives identical legs") {
    auto t = synth::three_planted(60, 4, 2);
    ModelConfig cfg;
    auto c = compare_subset_vs_full(t, FeatureSet::all_selected(t.feature_names), 3, 5, cfg);
    CHECK(c.row.subset == c.row.full);
    CHECK(c.subset_report.predictions == c.full_report.predictions);
    CHECK(c.row.subset_size == 4);
    CHECK(c.row.total_size == 4);
    CHECK(c.subset_report.fold_plan == c.full_report.fold_plan);
  }

  TEST_CASE("noise-only subset loses to the full set") {
    ModelConfig cfg;
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto t = synth::single_planted(80, 4, 0, seed);
      auto fs = FeatureSet::from_selected(t.feature_names, names({"f1", "f2", "f3"}));
      auto c = compare_subset_vs_full(t, fs, 3, seed, cfg);
      wins += c.row.subset.r2 < c.row.full.r2;
    }
    CHECK(wins >= 18);
  }

  TEST_CASE("dropping a redundant copy costs little") {
    ModelConfig cfg;
    auto t = synth::three_planted(120, 4, 6);
    for (std::size_t i = 0; i < t.n(); ++i) t.values(i, 3) = t.values(i, 0);
    auto fs = FeatureSet::from_selected(t.feature_names, names({"f0", "f1", "f2"}));
    auto c = compare_subset_vs_full(t, fs, 3, 6, cfg);
    CHECK(std::abs(c.row.subset.r2 - c.row.full.r2) <= 0.05);
  }

  TEST_CASE("progress is monotone and ends at one") {
    auto t = synth::three_planted(40, 3, 2);
    ModelConfig cfg;
    cfg.svr_grid = {{1, 0.3, 0.1}};
    std::vector<double> seen;
    compare_subset_vs_full(t, FeatureSet::from_selected(t.feature_names, names({"f0"})), 2, 1, cfg,
                           [&](double p) { seen.push_back(p); });
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    CHECK(seen.back() == 1.0);
  }

  TEST_CASE("empty selection is rejected") {
    auto t = synth::three_planted(40, 3, 2);
    FeatureSet fs{{}, t.feature_names};
    CHECK_THROWS(compare_subset_vs_full(t, fs, 2, 1, ModelConfig{}));
  }
}

TEST_SUITE("feature set") {
  const std::vector<std::string> cols{"a", "b", "c", "d"};

  TEST_CASE("move and move back") {
    auto fs = FeatureSet::from_selected(cols, names({"b", "d"}));
    const auto original = fs;
    fs.move("c", Direction::select, cols);
    CHECK(fs.selected == names({"b", "c", "d"}));
    fs.move("c", Direction::unselect, cols);
    CHECK(fs == original);
  }

  TEST_CASE("last feature can leave; errors") {
    auto fs = FeatureSet::from_selected(cols, names({"a"}));
    fs.move("a", Direction::unselect, cols);
    CHECK(fs.selected.empty());
    fs.validate(cols);
    CHECK_THROWS(fs.move("zzz", Direction::select, cols));
    CHECK_THROWS(fs.move("a", Direction::unselect, cols));
    CHECK_THROWS(FeatureSet::from_selected(cols, names({"q"})));
  }

  TEST_CASE("partition holds after random moves") {
    std::mt19937_64 rng(1);
    auto fs = FeatureSet::all_selected(cols);
    for (int i = 0; i < 200; ++i) {
      const auto& name = cols[rng() % 4];
      fs.move(name, fs.is_selected(name) ? Direction::unselect : Direction::select, cols);
      fs.validate(cols);
      CHECK(std::is_sorted(fs.selected.begin(), fs.selected.end()));
    }
  }

  TEST_CASE("direction text") {
    CHECK(parse_direction("select") == Direction::select);
    CHECK(to_string(Direction::unselect) == "unselect");
    CHECK_THROWS(parse_direction("sideways"));
  }
}

TEST_SUITE("wavelength histogram") {
  IndexRegistry two_indices() {
    IndexRegistry reg;
    reg.add(IndexDefinition::make("NDVI", "(R800 - R670) / (R800 + R670)"));
    reg.add(IndexDefinition::make("SR", "R800 / R670"));
    reg.add(IndexDefinition::make("WI", "R900 / R970"));
    reg.add(IndexDefinition::make("NIR", "R800 * R800 - R800"));
    return reg;
  }

  std::size_t bin_of(const WavelengthHistogram& h, double w) {
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      if (w >= h.edges[b] && (w < h.edges[b + 1] || b + 1 == h.counts.size())) return b;
    return h.counts.size();
  }

  TEST_CASE("one index, two bins") {
    FeatureSet fs{names({"NDVI"}), {}};
    auto h = wavelength_histogram(fs, two_indices());
    std::size_t nonzero = 0;
    for (auto c : h.counts) nonzero += c > 0;
    CHECK(nonzero == 2);
    CHECK(h.counts[bin_of(h, 670)] == 1);
    CHECK(h.counts[bin_of(h, 800)] == 1);
    CHECK(h.edges.front() == 400.0);
    CHECK(h.edges.back() == 900.0);
  }

  TEST_CASE("shared wavelength counts per index") {
    FeatureSet fs{names({"NDVI", "SR"}), {}};
    auto h = wavelength_histogram(fs, two_indices());
    CHECK(h.counts[bin_of(h, 800)] == 2);
    CHECK(h.total_references == 4);
  }

  TEST_CASE("repeats within a formula count once unless asked") {
    FeatureSet fs{names({"NIR"}), {}};
    auto once = wavelength_histogram(fs, two_indices());
    WavelengthHistogramOptions opt;
    opt.count_repeats = true;
    auto many = wavelength_histogram(fs, two_indices(), opt);
    CHECK(once.total_references == 1);
    CHECK(many.total_references == 3);
  }

  TEST_CASE("900 nm is in range, 970 overflows, missing names reported") {
    FeatureSet fs{names({"WI", "GHOST"}), {}};
    auto h = wavelength_histogram(fs, two_indices());
    CHECK(h.counts.back() == 1);
    CHECK(h.overflow == 1);
    CHECK(h.overflow_wavelengths == std::vector<double>{970});
    CHECK(h.missing_features == names({"GHOST"}));
  }

  TEST_CASE("conservation over random registries") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> wl(400.0, 996.2);
    for (int trial = 0; trial < 30; ++trial) {
      IndexRegistry reg;
      std::vector<std::string> selected;
      std::size_t expected = 0, expected_over = 0;
      for (int i = 0; i < 12; ++i) {
        const int terms = 1 + int(rng() % 4);
        std::string formula;
        for (int k = 0; k < terms; ++k) {
          if (k) formula += " + ";
          formula += "R" + std::to_string(std::round(wl(rng) * 10) / 10).substr(0, 5);
        }
        auto def = IndexDefinition::make("I" + std::to_string(i), formula);
        if (rng() % 2) {
          selected.push_back(def.name);
          expected += def.wavelengths_used.size();
          for (double w : def.wavelengths_used) expected_over += w > 900.0;
        }
        reg.add(std::move(def));
      }
      auto h = wavelength_histogram(FeatureSet{selected, {}}, reg);
      CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) + h.overflow == expected);
      CHECK(h.overflow == expected_over);
      CHECK(h.overflow_wavelengths.size() == expected_over);
    }
  }
}

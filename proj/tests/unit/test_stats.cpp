#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "specsel/error.hpp"
#include "specsel/stats/correlation.hpp"
#include "specsel/stats/hcluster.hpp"
#include "specsel/stats/histogram.hpp"
#include "specsel/stats/kde.hpp"

using namespace specsel;

namespace {

bool is_permutation_of_iota(std::vector<std::size_t> v, std::size_t n) {
  if (v.size() != n) return false;
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] != i) return false;
  return true;
}

double phi(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2 * std::numbers::pi); }

}  // namespace

TEST_SUITE("pearson") {
  TEST_CASE("examples") {
    std::vector<double> x{1, 2, 3};
    CHECK(pearson(x, std::vector<double>{2, 4, 6}).r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, std::vector<double>{3, 2, 1}).r == doctest::Approx(-1.0).epsilon(1e-15));
    const double want = oracle::pearson(x, {1, 2, 4});
    CHECK(want == doctest::Approx(0.98198).epsilon(1e-5));
    CHECK(pearson(x, std::vector<double>{1, 2, 4}).r == doctest::Approx(want).epsilon(1e-14));
    auto flat = pearson(x, std::vector<double>{5, 5, 5});
    CHECK(flat.r == 0.0);
    CHECK(flat.degenerate);
  }

  TEST_CASE("errors") {
    CHECK_THROWS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}));
    CHECK_THROWS(pearson(std::vector<double>{1}, std::vector<double>{1}));
  }

  TEST_CASE("stays inside [-1, 1]") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(5), y(5);
      for (auto& v : x) v = nd(rng);
      for (std::size_t i = 0; i < 5; ++i) y[i] = 1e8 * x[i] + 1e12;
      auto r = pearson(x, y).r;
      CHECK(r <= 1.0);
      CHECK(r >= -1.0);
    }
  }
}

TEST_SUITE("correlation matrix") {
  TEST_CASE("single feature") {
    FeatureTable t = synth::make_table(4, 1);
    t.values(0, 0) = 1; t.values(1, 0) = 2; t.values(2, 0) = 3; t.values(3, 0) = 5;
    t.target = {2, 1, 4, 3};
    auto m = correlation_matrix(t);
    REQUIRE(m.labels.size() == 2);
    CHECK(m.labels.back() == t.target_name);
    CHECK(m.values(0, 1) == m.values(1, 0));
    CHECK(m.values(0, 1) == doctest::Approx(oracle::pearson({1, 2, 3, 5}, {2, 1, 4, 3})).epsilon(1e-14));
    CHECK(m.values(0, 0) == 1.0);
  }

  TEST_CASE("duplicated column has mutual entry 1") {
    auto t = synth::random_table(30, 3, 5);
    for (std::size_t i = 0; i < t.n(); ++i) t.values(i, 2) = t.values(i, 0);
    auto m = correlation_matrix(t);
    CHECK(m.values(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("degenerate column is flagged and zeroed") {
    auto t = synth::random_table(20, 3, 9);
    for (std::size_t i = 0; i < t.n(); ++i) t.values(i, 1) = 4.0;
    auto m = correlation_matrix(t);
    CHECK(m.degenerate[1]);
    CHECK_FALSE(m.degenerate[0]);
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      CHECK(m.values(1, j) == 0.0);
      CHECK(m.values(j, 1) == 0.0);
    }
  }

  TEST_CASE("matches brute force and is invariant to rescaling") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-50, 50);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto t = synth::random_table(40 + seed * 7, 5, seed);
      auto m = correlation_matrix(t);
      const std::size_t L = t.d() + 1;
      auto column = [&](std::size_t j) {
        return j == t.d() ? t.target : t.values.column(j);
      };
      for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b) {
          const double want = a == b ? 1.0 : oracle::pearson(column(a), column(b));
          CHECK(std::abs(m.values(a, b) - want) <= 1e-12);
          CHECK(m.values(a, b) == m.values(b, a));
        }
      auto scaled = t;
      for (std::size_t j = 0; j < t.d(); ++j) {
        const double s = scale(rng), o = shift(rng);
        for (std::size_t i = 0; i < t.n(); ++i) scaled.values(i, j) = s * t.values(i, j) + o;
      }
      auto m2 = correlation_matrix(scaled);
      for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b) CHECK(std::abs(m.values(a, b) - m2.values(a, b)) <= 1e-10);
      CHECK(is_permutation_of_iota(m.display_order, L));
    }
  }
}

TEST_SUITE("hcluster") {
  TEST_CASE("hand-run average linkage") {
    Matrix d(3, 3);
    d(0, 1) = d(1, 0) = 0.1;
    d(0, 2) = d(2, 0) = 1.0;
    d(1, 2) = d(2, 1) = 1.0;
    auto den = hcluster_distances(d);
    REQUIRE(den.merges.size() == 2);
    CHECK(den.merges[0].a == 0);
    CHECK(den.merges[0].b == 1);
    CHECK(den.merges[0].distance == doctest::Approx(0.1));
    CHECK(den.merges[1].a == 2);
    CHECK(den.merges[1].b == 3);
    CHECK(den.merges[1].distance == doctest::Approx(1.0));
    CHECK(den.merges[1].size == 3);
    CHECK(den.leaf_order == std::vector<std::size_t>{2, 0, 1});
  }

  TEST_CASE("average linkage weights by cluster size") {
    // Points on a line at 0, 1, 5, 11: merge {0,1}, then {0,1} with 5 at
    // (5 + 4) / 2 = 4.5, then 11 at (11 + 10 + 6) / 3 = 9.
    std::vector<double> p{0, 1, 5, 11};
    Matrix d(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) d(i, j) = std::abs(p[i] - p[j]);
    auto den = hcluster_distances(d);
    CHECK(den.merges[0].distance == 1.0);
    CHECK(den.merges[1].distance == 4.5);
    CHECK(den.merges[2].distance == 9.0);
    CHECK(den.leaf_order == std::vector<std::size_t>{3, 2, 0, 1});
    CHECK(den.flat_clusters(2.0) == std::vector<std::size_t>{2, 2, 1, 0});
    CHECK(den.flat_clusters(100.0) == std::vector<std::size_t>{0, 0, 0, 0});
  }

  TEST_CASE("ties resolve to the smallest pair") {
    Matrix d(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) d(i, j) = i == j ? 0.0 : 1.0;
    auto den = hcluster_distances(d);
    CHECK(den.merges[0].a == 0);
    CHECK(den.merges[0].b == 1);
    CHECK(den.merges[1].a == 2);
    CHECK(den.merges[1].b == 3);
  }

  TEST_CASE("identical correlation profiles merge first at distance zero") {
    auto t = synth::random_table(30, 4, 21);
    for (std::size_t i = 0; i < t.n(); ++i) t.values(i, 3) = 2 * t.values(i, 1) + 1;
    auto den = hcluster(correlation_matrix(t));
    CHECK(den.merges[0].a == 1);
    CHECK(den.merges[0].b == 3);
    CHECK(den.merges[0].distance == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("random matrices: permutation, monotone merges, determinism") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      auto t = synth::random_table(25, 2 + seed % 12, seed);
      auto cm = correlation_matrix(t);
      auto a = hcluster(cm);
      auto b = hcluster(cm);
      CHECK(is_permutation_of_iota(a.leaf_order, cm.labels.size()));
      CHECK(a.merges.size() == cm.labels.size() - 1);
      for (std::size_t i = 1; i < a.merges.size(); ++i)
        CHECK(a.merges[i].distance >= a.merges[i - 1].distance - 1e-12);
      CHECK(a.leaf_order == b.leaf_order);
      CHECK(a.leaf_order == cm.display_order);
    }
  }

  TEST_CASE("fewer than two labels") {
    CHECK_THROWS(hcluster_distances(Matrix(1, 1)));
  }
}

TEST_SUITE("histogram") {
  TEST_CASE("two bins over an explicit range") {
    std::vector<double> v{0, 1, 2, 3};
    auto h = histogram(v, 2, std::pair{0.0, 3.0});
    CHECK(h.edges == std::vector<double>{0, 1.5, 3});
    CHECK(h.counts == std::vector<std::size_t>{2, 2});
  }

  TEST_CASE("constant values widen the range") {
    std::vector<double> v(7, 2.0);
    auto h = histogram(v, 3);
    CHECK(h.edges.front() == 1.5);
    CHECK(h.edges.back() == 2.5);
    CHECK(h.counts == std::vector<std::size_t>{0, 7, 0});
  }

  TEST_CASE("out-of-range values are counted separately") {
    std::vector<double> v{-1, 0, 0.5, 1, 2, 3};
    auto h = histogram(v, 4, std::pair{0.0, 1.0});
    CHECK(h.below == 1);
    CHECK(h.above == 2);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) + h.below + h.above == v.size());
    CHECK(h.total() == v.size());
  }

  TEST_CASE("uniform samples stay within five sigma") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> v(1000);
    for (auto& x : v) x = u(rng);
    auto h = histogram(v, 10, std::pair{0.0, 1.0});
    const double sigma = std::sqrt(1000 * 0.1 * 0.9);
    for (auto c : h.counts) CHECK(std::abs(double(c) - 100.0) <= 5 * sigma);
    CHECK(h.total() == 1000);
  }

  TEST_CASE("errors") {
    CHECK_THROWS(histogram(std::vector<double>{}, 3));
    CHECK_THROWS(histogram(std::vector<double>{1.0}, 0));
    CHECK_THROWS(histogram(std::vector<double>{1.0}, 3, std::pair{1.0, 1.0}));
  }
}

TEST_SUITE("kde") {
  TEST_CASE("single point, unit bandwidth") {
    Matrix p(1, 1);
    GridAxis axis{0.0, 0.0, 1};
    std::vector<GridAxis> axes{axis};
    auto e = kde(p, axes, std::vector<double>{1.0});
    CHECK(e.densities.at(0) == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi)).epsilon(1e-15));
    CHECK(e.densities.at(0) == doctest::Approx(0.39894).epsilon(1e-5));
  }

  TEST_CASE("symmetric data on a symmetric grid") {
    std::vector<double> v{-2, -0.5, 0.5, 2};
    Matrix p(4, 1);
    for (std::size_t i = 0; i < 4; ++i) p(i, 0) = v[i];
    std::vector<GridAxis> axes{{-5, 5, 101}};
    auto e = kde(p, axes);
    for (std::size_t i = 0; i < 101; ++i) CHECK(std::abs(e.densities[i] - e.densities[100 - i]) <= 1e-12);
  }

  TEST_CASE("1D: direct sum and normalization over random data") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(3.0, 2.0);
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 5 + t * 9;
      Matrix p(n, 1);
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = p(i, 0) = nd(rng);
      const double h = silverman_bandwidth(col);
      std::vector<GridAxis> axes{padded_axis(col, h, 800)};
      auto e = kde(p, axes);
      CHECK(e.bandwidth[0] == h);
      const auto g = axes[0].points();
      double integral = 0;
      for (std::size_t q = 0; q < g.size(); ++q) {
        double want = 0;
        for (double s : col) want += phi((g[q] - s) / h) / h;
        want /= double(n);
        CHECK(std::abs(e.densities[q] - want) <= 1e-12);
        CHECK(e.densities[q] >= 0.0);
        if (q > 0) integral += 0.5 * (e.densities[q] + e.densities[q - 1]) * (g[q] - g[q - 1]);
      }
      CHECK(std::abs(integral - 1.0) <= 1e-2);
    }
  }

  TEST_CASE("2D: double sum, normalization, permutation invariance") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    Matrix p(50, 2);
    for (std::size_t i = 0; i < 50; ++i) {
      p(i, 0) = nd(rng);
      p(i, 1) = 0.5 * p(i, 0) + nd(rng);
    }
    const auto cx = p.column(0), cy = p.column(1);
    const double hx = silverman_bandwidth(cx), hy = silverman_bandwidth(cy);
    std::vector<GridAxis> axes{padded_axis(cx, hx, 120), padded_axis(cy, hy, 110)};
    auto e = kde(p, axes);
    const auto gx = axes[0].points(), gy = axes[1].points();
    double integral = 0;
    for (std::size_t a = 0; a < gx.size(); ++a)
      for (std::size_t b = 0; b < gy.size(); ++b) {
        double want = 0;
        for (std::size_t s = 0; s < 50; ++s) want += phi((gx[a] - cx[s]) / hx) / hx * phi((gy[b] - cy[s]) / hy) / hy;
        want /= 50.0;
        const double got = e.densities[a * gy.size() + b];
        CHECK(std::abs(got - want) <= 1e-12);
        const double wa = (a == 0 || a + 1 == gx.size()) ? 0.5 : 1.0;
        const double wb = (b == 0 || b + 1 == gy.size()) ? 0.5 : 1.0;
        integral += wa * wb * got;
      }
    integral *= (gx[1] - gx[0]) * (gy[1] - gy[0]);
    CHECK(std::abs(integral - 1.0) <= 1e-2);

    std::vector<std::size_t> perm(50);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto e2 = kde(p.select_rows(perm), axes);
    for (std::size_t q = 0; q < e.densities.size(); ++q)
      CHECK(std::abs(e.densities[q] - e2.densities[q]) <= 1e-12);
  }

  TEST_CASE("bandwidth rules and errors") {
    std::vector<double> same(5, 3.0);
    CHECK(silverman_bandwidth(same) == 1.0);
    std::vector<double> v{0, 1};
    CHECK(silverman_bandwidth(v) == doctest::Approx(1.06 * std::sqrt(0.5) * std::pow(2.0, -0.2)));
    Matrix p(2, 1);
    std::vector<GridAxis> zero{{0, 1, 0}};
    CHECK_THROWS(kde(p, zero));
    std::vector<GridAxis> ok{{0, 1, 5}};
    CHECK_THROWS(kde(p, ok, std::vector<double>{0.0}));
    CHECK_THROWS(kde(Matrix(0, 1), ok));
  }
}

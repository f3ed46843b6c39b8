#include <doctest.h>

#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "volclust/dvc.hpp"
#include "volclust/error.hpp"
#include "volclust/garch.hpp"
#include "volclust/io.hpp"
#include "volclust/surrogate.hpp"

using namespace volclust;

namespace {

BinningScheme scheme_with_bins(int n) {
  std::vector<double> edges;
  for (int i = 0; i <= n; ++i) edges.push_back(-n + 2.0 * i);  // centers -n+1, ..., n-1
  return BinningScheme(edges);
}

DvcProfile profile_of(std::vector<std::pair<double, double>> xy) {
  DvcProfile p;
  for (auto [x, y] : xy) p.points.push_back({x, y, 1000});
  return p;
}

}  // namespace

TEST_CASE("conditional_distribution examples") {
  const auto scheme = scheme_with_bins(3);
  SUBCASE("hand-enumerated transitions") {
    const SymbolicSeries s({0, 1, 0, 1, 0, 2}, scheme);
    const auto d = conditional_distribution(s, 0);
    CHECK(d.support_count == 3);
    REQUIRE(d.probabilities.size() == 2);
    CHECK(d.probabilities.at(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d.probabilities.at(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("constant series") {
    const auto d = conditional_distribution(SymbolicSeries({1, 1, 1, 1}, scheme), 1);
    CHECK(d.support_count == 3);
    CHECK(d.probabilities.at(1) == 1.0);
  }
  SUBCASE("absent symbol, and a symbol only at the last position") {
    const SymbolicSeries s({1, 1, 2}, scheme);
    CHECK(conditional_distribution(s, 0).support_count == 0);
    CHECK(conditional_distribution(s, 0).probabilities.empty());
    CHECK(conditional_distribution(s, 2).support_count == 0);
  }
  SUBCASE("invalid symbol") {
    const SymbolicSeries s({1, 1}, scheme);
    CHECK_THROWS_AS(conditional_distribution(s, 3), ValidationError);
    CHECK_THROWS_AS(conditional_distribution(TransitionCounts(s), -1), ValidationError);
  }
}

TEST_CASE("conditional distributions match brute-force counts on random series") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_sym = 3 + 2 * static_cast<int>(gen() % 5);
    const auto scheme = scheme_with_bins(n_sym);
    std::vector<int> v(1 + gen() % 400);
    for (int& x : v) x = static_cast<int>(gen() % static_cast<std::uint64_t>(n_sym));
    const SymbolicSeries s(v, scheme);
    const auto m = oracle::transition_matrix(v, n_sym);
    const TransitionCounts counts(s);
    std::int64_t total = 0;
    for (int i = 0; i < n_sym; ++i) {
      const auto a = conditional_distribution(s, i);
      const auto b = conditional_distribution(counts, i);
      std::int64_t row = 0;
      for (auto c : m[static_cast<std::size_t>(i)]) row += c;
      total += a.support_count;
      CHECK(a.support_count == row);
      CHECK(b.support_count == row);
      double sum = 0;
      for (int j = 0; j < n_sym; ++j) {
        const auto c = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const double expect = row ? static_cast<double>(c) / static_cast<double>(row) : 0.0;
        const double got = a.probabilities.contains(j) ? a.probabilities.at(j) : 0.0;
        CHECK(std::abs(got - expect) < 1e-12);
        CHECK((b.probabilities.contains(j) ? b.probabilities.at(j) : 0.0) == got);
        sum += got;
      }
      if (row > 0) CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    CHECK(total == static_cast<std::int64_t>(v.size()) - 1);
  }
}

TEST_CASE("conditional_abs_mean") {
  // centers -2, 0, 2 for a 3-bin scheme over [-3, 3]
  const BinningScheme three({-3.0, -1.0, 1.0, 3.0});
  // centers -1, 0, 1 over [-1.5, 1.5]
  const BinningScheme unit({-1.5, -0.5, 0.5, 1.5});

  ConditionalDistribution d{1, {{0, 0.5}, {2, 0.5}}, 10};
  CHECK(conditional_abs_mean(d, unit) == doctest::Approx(1.0));
  d.probabilities = {{1, 1.0}};
  CHECK(conditional_abs_mean(d, unit) == 0.0);
  d.probabilities = {{0, 0.25}, {1, 0.5}, {2, 0.25}};
  CHECK(conditional_abs_mean(d, three) == doctest::Approx(1.0).epsilon(1e-15));

  ConditionalDistribution empty{1, {}, 0};
  CHECK_THROWS_AS(conditional_abs_mean(empty, three), ValidationError);
}

TEST_CASE("dvc_profile") {
  const auto scheme = scheme_with_bins(3);
  SUBCASE("single-symbol series") {
    const SymbolicSeries s(std::vector<int>(100, 1), scheme);
    const auto p = dvc_profile(s, 10);
    REQUIRE(p.points.size() == 1);
    CHECK(p.points[0].s_value == 0.0);
    CHECK(p.points[0].abs_mean == 0.0);
    CHECK(p.points[0].count == 99);
  }
  SUBCASE("threshold excludes everything") {
    const SymbolicSeries s({0, 1, 0, 1, 0, 2}, scheme);
    CHECK_THROWS_AS(dvc_profile(s, 4), ValidationError);
    CHECK_THROWS_AS(dvc_profile(s, 0), ValidationError);
  }
  SUBCASE("iid series over 5 symbols matches the transition-matrix oracle exactly") {
    const auto five = scheme_with_bins(5);
    std::mt19937_64 gen(77);
    std::vector<int> v(100000);
    for (int& x : v) x = static_cast<int>(gen() % 5);
    const auto p = dvc_profile(SymbolicSeries(v, five), 100);
    const auto expect = oracle::profile(oracle::transition_matrix(v, 5), five.centers(), 100);
    REQUIRE(p.points.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(p.points[i].count == expect[i].count);
      CHECK(p.points[i].s_value == expect[i].s_value);
      CHECK(std::abs(p.points[i].abs_mean - expect[i].abs_mean) < 1e-12);
    }
  }
}

TEST_CASE("fit_dvc recovers exact slopes") {
  SUBCASE("positive side y = 0.5 x, negative side y = -0.6 x") {
    const auto r = fit_dvc(profile_of({{-2, 1.2}, {-1, 0.6}, {0.5, 0.25}, {1.0, 0.5}, {2.0, 1.0}}));
    CHECK(std::abs(r.dvc_p - 0.5) < 1e-12);
    CHECK(std::abs(r.dvc_n + 0.6) < 1e-12);
    CHECK(std::abs(r.intercept_p) < 1e-12);
    CHECK(std::abs(r.intercept_n) < 1e-12);
    CHECK(r.n_points_pos == 3);
    CHECK(r.n_points_neg == 2);
  }
  SUBCASE("y = |x| including the zero-center point") {
    const auto r = fit_dvc(profile_of({{-3, 3}, {-2, 2}, {-1, 1}, {0, 0}, {1, 1}, {2, 2}, {3, 3}}));
    CHECK(std::abs(r.dvc_p - 1.0) < 1e-12);
    CHECK(std::abs(r.dvc_n + 1.0) < 1e-12);
    CHECK(r.n_points_pos == 4);
  }
  SUBCASE("flat profile has zero slope") {
    const auto r = fit_dvc(profile_of({{-2, 0.8}, {-1, 0.8}, {0, 0.8}, {1, 0.8}, {2, 0.8}}));
    CHECK(std::abs(r.dvc_p) < 1e-12);
    CHECK(std::abs(r.dvc_n) < 1e-12);
    CHECK(r.intercept_p == doctest::Approx(0.8));
  }
  SUBCASE("too few points per side") {
    CHECK_THROWS_AS(fit_dvc(profile_of({{-1, 1}, {0, 0}, {1, 1}})), ValidationError);
    CHECK_THROWS_AS(fit_dvc(profile_of({{-2, 1}, {-1, 1}, {1, 1}})), ValidationError);
  }
}

TEST_CASE("fit_dvc exact recovery on random lines through the origin") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> slope(0.05, 2.0), xs(0.01, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double bp = slope(gen);
    const double bn = -slope(gen);
    std::vector<double> x;
    for (int i = 0; i < 6; ++i) x.push_back(xs(gen));
    std::sort(x.begin(), x.end());
    DvcProfile p;
    for (auto it = x.rbegin(); it != x.rend(); ++it) p.points.push_back({-*it, bn * -*it, 200});
    for (double v : x) p.points.push_back({v, bp * v, 200});
    const auto r = fit_dvc(p);
    CHECK(std::abs(r.dvc_p - bp) < 1e-12);
    CHECK(std::abs(r.dvc_n - bn) < 1e-12);
  }
}

TEST_CASE("analyze") {
  SUBCASE("iid Gaussian series is flat") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = analyze(iid_gaussian(100000, 1.0, Seed{seed}));
      CHECK(std::abs(r.dvc_p) < 0.05);
      CHECK(std::abs(r.dvc_n) < 0.05);
    }
  }
  SUBCASE("GARCH series clusters") {
    const auto r = analyze(simulate(GarchParams(0.05, 0.10, 0.85), 100000, Seed{3}));
    CHECK(r.dvc_p > 0.1);
    CHECK(r.dvc_n < -0.1);
    REQUIRE(r.config);
    CHECK(*r.config == AnalysisConfig{});
  }
  SUBCASE("deterministic") {
    const auto series = iid_gaussian(50000, 1.0, Seed{5});
    const auto a = analyze(series);
    const auto b = analyze(series);
    CHECK(a == b);
    CHECK(to_json(a).dump() == to_json(b).dump());
  }
  SUBCASE("profile invariants") {
    const auto r = analyze(simulate(GarchParams(0.05, 0.10, 0.85), 50000, Seed{4}));
    double prev = -1e300;
    for (const auto& pt : r.profile.points) {
      CHECK(pt.abs_mean >= 0.0);
      CHECK(pt.s_value > prev);
      CHECK(pt.count >= 100);
      prev = pt.s_value;
    }
  }
  SUBCASE("stage-tagged errors") {
    try {
      analyze(iid_gaussian(10, 1.0, Seed{1}));
      FAIL("expected an error");
    } catch (const PipelineError& e) {
      CHECK(e.stage() == "dvc_profile");
      CHECK_FALSE(e.numeric());
    }
    try {
      analyze(ReturnSeries({1.0, 1.0, 1.0}));
      FAIL("expected an error");
    } catch (const PipelineError& e) {
      CHECK(e.stage() == "standardize");
    }
    AnalysisConfig bad;
    bad.n_bins = 40;
    CHECK_THROWS_AS(analyze(iid_gaussian(100, 1.0, Seed{1}), bad), PipelineError);
  }
}

TEST_CASE("DvcResult serialization") {
  auto r = fit_dvc(profile_of({{-2, 1.2}, {-1, 0.6}, {0.5, 0.25}, {1.0, 0.5}}));
  r.config = AnalysisConfig{};
  const auto j = to_json(r);
  CHECK(j.contains("dvc_p"));
  CHECK(j["profile"].size() == 4);
  CHECK(j["profile"][0].dump() == R"({"s_value":-2.0,"abs_mean":1.2,"count":1000})");
  CHECK(j["config"]["n_bins"] == 41);
  CHECK(result_from_json(j) == r);
  CHECK_THROWS_AS(result_from_json(Json::parse(R"({"dvc_p": 1})")), ValidationError);

  std::ostringstream csv;
  write_profile_csv(csv, r.profile);
  CHECK(csv.str().starts_with("s_value,abs_mean,count\n-2,1.2,1000\n"));
}

TEST_CASE("iid clustering estimates shrink with series length") {
  auto median_abs = [](std::size_t n) {
    std::vector<double> v;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = analyze(iid_gaussian(n, 1.0, Seed{seed + 500}));
      v.push_back(0.5 * (std::abs(r.dvc_p) + std::abs(r.dvc_n)));
    }
    return oracle::median(v);
  };
  CHECK(median_abs(200000) < median_abs(20000));
}

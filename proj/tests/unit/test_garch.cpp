#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "../support/oracles.hpp"
#include "volclust/dvc.hpp"
#include "volclust/error.hpp"
#include "volclust/garch.hpp"
#include "volclust/io.hpp"
#include "volclust/stats.hpp"
#include "volclust/surrogate.hpp"

using namespace volclust;

namespace {
const GarchParams kReference(0.05, 0.10, 0.85);
}

TEST_CASE("GarchParams enforces stationarity") {
  CHECK_THROWS_AS(GarchParams(0.0, 0.1, 0.1), ValidationError);
  CHECK_THROWS_AS(GarchParams(0.1, -0.1, 0.1), ValidationError);
  CHECK_THROWS_AS(GarchParams(0.1, 0.1, -0.1), ValidationError);
  CHECK_THROWS_AS(GarchParams(0.1, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(GarchParams(0.1, 0.6, 0.5), ValidationError);
  CHECK_NOTHROW(GarchParams(0.1, 0.0, 0.0));
  CHECK(GarchParams(0.2, 0.3, 0.3).unconditional_variance() == doctest::Approx(0.5));
}

TEST_CASE("simulate") {
  SUBCASE("sample variance approaches the unconditional variance") {
    const auto r = simulate(GarchParams(0.2, 0.3, 0.3), 500000, Seed{1});
    CHECK(r.size() == 500000);
    const auto m = oracle::moments({r.values().begin(), r.values().end()});
    CHECK(std::abs(m.variance - 0.5) / 0.5 < 0.05);
  }
  SUBCASE("alpha = beta = 0 gives iid Gaussian returns") {
    const auto r = simulate(GarchParams(0.7, 0.0, 0.0), 500000, Seed{2});
    const auto m = oracle::moments({r.values().begin(), r.values().end()});
    CHECK(std::abs(m.excess_kurtosis) < 0.1);
    CHECK(std::abs(m.variance - 0.7) / 0.7 < 0.01);
  }
  SUBCASE("deterministic per seed") {
    CHECK(simulate(kReference, 1000, Seed{9}) == simulate(kReference, 1000, Seed{9}));
    CHECK_FALSE(simulate(kReference, 1000, Seed{9}) == simulate(kReference, 1000, Seed{10}));
  }
  SUBCASE("length precondition") { CHECK_THROWS_AS(simulate(kReference, 1, Seed{1}), ValidationError); }
}

TEST_CASE("neg_log_likelihood") {
  SUBCASE("constant-variance model reduces to the iid closed form") {
    const auto r = iid_gaussian(5000, 1.3, Seed{4});
    double ss = 0;
    for (double x : r.values()) ss += x * x;
    const double n = static_cast<double>(r.size());
    const double mle = ss / n;
    const double closed = 0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(mle) + 1.0);
    CHECK(neg_log_likelihood(GarchParams(mle, 0.0, 0.0), r) == doctest::Approx(closed).epsilon(1e-12));
  }
  SUBCASE("true parameters beat doubled omega") {
    const auto r = simulate(kReference, 100000, Seed{5});
    CHECK(neg_log_likelihood(kReference, r) < neg_log_likelihood(GarchParams(0.10, 0.10, 0.85), r));
  }
  SUBCASE("variance path follows the recursion from the sample-variance start") {
    const auto r = simulate(kReference, 2000, Seed{6});
    const auto v = conditional_variances(kReference, r.values());
    const double s2 = sample_variance(r.values());
    CHECK(std::abs(v[0] - (0.05 + 0.95 * s2)) < 1e-12);
    for (std::size_t t = 1; t < v.size(); ++t) {
      CHECK(std::abs(v[t] - (0.05 + 0.10 * r[t - 1] * r[t - 1] + 0.85 * v[t - 1])) < 1e-10);
    }
    CHECK(neg_log_likelihood(r.values(), v) == doctest::Approx(neg_log_likelihood(kReference, r)).epsilon(1e-13));
  }
}

TEST_CASE("fit") {
  SUBCASE("recovers simulation parameters") {
    const auto r = simulate(kReference, 50000, Seed{11});
    const auto f = fit(r);
    CHECK(f.converged);
    CHECK(std::abs(f.params.omega() - 0.05) / 0.05 < 0.2);
    CHECK(std::abs(f.params.alpha() - 0.10) / 0.10 < 0.2);
    CHECK(std::abs(f.params.beta() - 0.85) / 0.85 < 0.2);
  }
  SUBCASE("stored state is internally consistent") {
    const auto r = simulate(kReference, 20000, Seed{12});
    const auto f = fit(r);
    REQUIRE(f.conditional_variances.size() == r.size());
    const auto v = conditional_variances(f.params, r.values());
    for (std::size_t t = 0; t < v.size(); ++t) {
      CHECK(f.conditional_variances[t] > 0.0);
      CHECK(std::abs(f.conditional_variances[t] - v[t]) < 1e-10);
    }
    CHECK(std::abs(-neg_log_likelihood(r.values(), f.conditional_variances) - f.log_likelihood) < 1e-8);
    CHECK(std::abs(-neg_log_likelihood(f.params, r) - f.log_likelihood) < 1e-8);
  }
  SUBCASE("refitting from the optimum reproduces the likelihood") {
    const auto r = simulate(kReference, 20000, Seed{13});
    const auto f = fit(r);
    const auto g = fit(r, f.params);
    CHECK(std::abs(g.log_likelihood - f.log_likelihood) <= 1e-6 * std::abs(f.log_likelihood));
  }
  SUBCASE("deterministic") {
    const auto r = simulate(kReference, 5000, Seed{14});
    const auto a = fit(r);
    const auto b = fit(r);
    CHECK(a.params == b.params);
    CHECK(a.log_likelihood == b.log_likelihood);
  }
  SUBCASE("no ARCH effect in iid data") {
    std::vector<double> alphas;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) alphas.push_back(fit(iid_gaussian(50000, 1.0, Seed{seed})).params.alpha());
    CHECK(oracle::median(alphas) < 0.02);
  }
  SUBCASE("short series rejected") {
    CHECK_THROWS_AS(fit(iid_gaussian(499, 1.0, Seed{1})), ValidationError);
  }
}

TEST_CASE("filter") {
  SUBCASE("true parameters return the innovations") {
    const auto r = simulate(kReference, 100000, Seed{21});
    const GarchFit truth{kReference, 0.0, conditional_variances(kReference, r.values()), true, 0};
    const auto z = filter(r, truth);
    CHECK(z.size() == r.size());
    const auto m = oracle::moments({z.values().begin(), z.values().end()});
    CHECK(std::abs(m.variance - 1.0) < 0.03);
  }
  SUBCASE("constant variance divides by a constant") {
    const auto r = iid_gaussian(1000, 2.0, Seed{22});
    const GarchParams flat(4.0, 0.0, 0.0);
    const GarchFit f{flat, 0.0, conditional_variances(flat, r.values()), true, 0};
    const auto z = filter(r, f);
    for (std::size_t t = 0; t < r.size(); ++t) CHECK(z[t] == doctest::Approx(r[t] / 2.0));
  }
  SUBCASE("length mismatch") {
    const auto r = iid_gaussian(1000, 1.0, Seed{23});
    const GarchFit f{kReference, 0.0, std::vector<double>(999, 1.0), true, 0};
    CHECK_THROWS_AS(filter(r, f), ValidationError);
  }
  SUBCASE("filtering collapses the measured clustering") {
    const auto r = simulate(kReference, 100000, Seed{24});
    const auto raw = analyze(r);
    const auto filtered = analyze(filter(r, fit(r)));
    CHECK(std::abs(filtered.dvc_p) <= 0.25 * std::abs(raw.dvc_p));
    CHECK(std::abs(filtered.dvc_n) <= 0.25 * std::abs(raw.dvc_n));
  }
}

TEST_CASE("GarchFit serialization") {
  const auto r = simulate(kReference, 1000, Seed{30});
  const GarchFit f{kReference, -123.5, conditional_variances(kReference, r.values()), true, 7};
  CHECK(to_json(f).dump() == R"({"omega":0.05,"alpha":0.1,"beta":0.85,"log_likelihood":-123.5,"converged":true})");
  std::ostringstream csv;
  write_variances_csv(csv, f);
  CHECK(csv.str().starts_with("index,variance\n0,"));
}

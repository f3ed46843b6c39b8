#include "volclust/io.hpp"

#include <array>
#include <charconv>
#include <ostream>

#include "volclust/error.hpp"

namespace volclust {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw NumericError("cannot format number");
  return {buf.data(), ptr};
}

void write_prices_csv(std::ostream& out, const PriceSeries& prices) {
  out << "timestamp,price\n";
  for (std::size_t i = 0; i < prices.size(); ++i) {
    out << prices.timestamps()[i] << ',' << format_double(prices.prices()[i]) << '\n';
  }
}

void write_returns_csv(std::ostream& out, const ReturnSeries& r) {
  out << "index,return\n";
  for (std::size_t i = 0; i < r.size(); ++i) out << i << ',' << format_double(r[i]) << '\n';
}

void write_symbols_csv(std::ostream& out, const SymbolicSeries& s) {
  out << "index,symbol\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << i << ',' << s.indices()[i] << '\n';
}

void write_profile_csv(std::ostream& out, const DvcProfile& profile) {
  out << "s_value,abs_mean,count\n";
  for (const auto& p : profile.points) {
    out << format_double(p.s_value) << ',' << format_double(p.abs_mean) << ',' << p.count << '\n';
  }
}

void write_variances_csv(std::ostream& out, const GarchFit& fit) {
  out << "index,variance\n";
  for (std::size_t i = 0; i < fit.conditional_variances.size(); ++i) {
    out << i << ',' << format_double(fit.conditional_variances[i]) << '\n';
  }
}

Json to_json(const BinningScheme& scheme) {
  return Json{{"n_bins", scheme.n_bins()}, {"edges", scheme.edges()}, {"centers", scheme.centers()}};
}

BinningScheme scheme_from_json(const Json& j) {
  try {
    BinningScheme scheme(j.at("edges").get<std::vector<double>>());
    if (j.at("n_bins").get<int>() != scheme.n_bins()) throw ValidationError("n_bins disagrees with edges");
    return scheme;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed binning scheme: ") + e.what());
  }
}

Json to_json(const AnalysisConfig& c) {
  return Json{{"n_bins", c.n_bins},
              {"clip_sigmas", c.clip_sigmas},
              {"min_count", c.min_count},
              {"standardize_first", c.standardize_first}};
}

AnalysisConfig config_from_json(const Json& j) {
  AnalysisConfig c;
  c.n_bins = j.value("n_bins", c.n_bins);
  c.clip_sigmas = j.value("clip_sigmas", c.clip_sigmas);
  c.min_count = j.value("min_count", c.min_count);
  c.standardize_first = j.value("standardize_first", c.standardize_first);
  return c;
}

Json to_json(const DvcResult& r) {
  Json points = Json::array();
  for (const auto& p : r.profile.points) {
    points.push_back(Json{{"s_value", p.s_value}, {"abs_mean", p.abs_mean}, {"count", p.count}});
  }
  return Json{{"dvc_p", r.dvc_p},
              {"dvc_n", r.dvc_n},
              {"intercept_p", r.intercept_p},
              {"intercept_n", r.intercept_n},
              {"n_points_pos", r.n_points_pos},
              {"n_points_neg", r.n_points_neg},
              {"profile", std::move(points)},
              {"config", r.config ? to_json(*r.config) : Json::object()}};
}

DvcResult result_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ValidationError("result document is not a JSON object");
    DvcResult r;
    r.dvc_p = j.at("dvc_p").get<double>();
    r.dvc_n = j.at("dvc_n").get<double>();
    r.intercept_p = j.value("intercept_p", 0.0);
    r.intercept_n = j.value("intercept_n", 0.0);
    for (const auto& p : j.at("profile")) {
      r.profile.points.push_back(
          {p.at("s_value").get<double>(), p.at("abs_mean").get<double>(), p.at("count").get<std::int64_t>()});
    }
    r.n_points_pos = j.value("n_points_pos", std::int64_t{0});
    r.n_points_neg = j.value("n_points_neg", std::int64_t{0});
    if (const auto it = j.find("config"); it != j.end() && it->is_object() && !it->empty()) {
      r.config = config_from_json(*it);
    }
    return r;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed result document: ") + e.what());
  }
}

Json to_json(const GarchFit& fit) {
  return Json{{"omega", fit.params.omega()},
              {"alpha", fit.params.alpha()},
              {"beta", fit.params.beta()},
              {"log_likelihood", fit.log_likelihood},
              {"converged", fit.converged}};
}

}  // namespace volclust

#include "volclust/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <string_view>

#include "volclust/error.hpp"
#include "volclust/stats.hpp"

namespace volclust {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Compares integer keys numerically without overflow: sign, then length, then digits.
int compare_integers(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    const auto nz = s.find_first_not_of('0');
    s = nz == std::string_view::npos ? std::string_view{} : s.substr(nz);
    if (s.empty()) neg = false;
    return std::pair{neg, s};
  };
  const auto [na, da] = split(a);
  const auto [nb, db] = split(b);
  if (na != nb) return na ? -1 : 1;
  int mag = 0;
  if (da.size() != db.size()) {
    mag = da.size() < db.size() ? -1 : 1;
  } else {
    const int c = da.compare(db);
    mag = c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return na ? -mag : mag;
}

// Position of the first key that does not exceed its predecessor.
std::optional<std::size_t> first_non_increasing(const std::vector<std::string>& keys) {
  const bool numeric = std::all_of(keys.begin(), keys.end(), [](const std::string& t) { return is_integer(t); });
  for (std::size_t i = 1; i < keys.size(); ++i) {
    const int c = numeric ? compare_integers(keys[i - 1], keys[i]) : keys[i - 1].compare(keys[i]);
    if (c >= 0) return i;
  }
  return std::nullopt;
}

}  // namespace

PriceSeries::PriceSeries(std::vector<std::string> timestamps, std::vector<double> prices)
    : timestamps_(std::move(timestamps)), prices_(std::move(prices)) {
  if (timestamps_.size() != prices_.size()) {
    throw ValidationError("timestamp and price columns differ in length");
  }
  if (prices_.size() < 2) throw ValidationError("price series needs at least 2 observations");
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!std::isfinite(prices_[i]) || prices_[i] <= 0.0) {
      throw ValidationError("price at position " + std::to_string(i) + " is not a positive finite number");
    }
  }
  if (const auto bad = first_non_increasing(timestamps_)) {
    throw ValidationError("timestamp at position " + std::to_string(*bad) + " does not increase");
  }
}

ReturnSeries::ReturnSeries(std::vector<double> values)
    : values_(std::move(values)), mean_(volclust::mean(values_)), stdev_(sample_stdev(values_)) {}

PriceSeries load_prices(std::istream& in) {
  std::vector<std::string> timestamps;
  std::vector<double> prices;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;

    if (!header_seen) {
      if (view != "timestamp,price") {
        throw ValidationError("line " + std::to_string(line_no) + ": expected header 'timestamp,price'");
      }
      header_seen = true;
      continue;
    }

    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const auto ts = trim(view.substr(0, comma));
    const auto px = trim(view.substr(comma + 1));
    if (ts.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty timestamp");

    double price = 0.0;
    const auto [ptr, ec] = std::from_chars(px.data(), px.data() + px.size(), price);
    if (px.empty() || ec != std::errc{} || ptr != px.data() + px.size()) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed price '" + std::string(px) + "'");
    }
    if (!std::isfinite(price) || price <= 0.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": price must be positive, got '" +
                            std::string(px) + "'");
    }
    timestamps.emplace_back(ts);
    lines.push_back(line_no);
    prices.push_back(price);
  }
  if (!header_seen) throw ValidationError("line 1: missing header 'timestamp,price'");
  if (prices.size() < 2) {
    throw ValidationError("need at least 2 price rows, found " + std::to_string(prices.size()));
  }
  if (const auto bad = first_non_increasing(timestamps)) {
    throw ValidationError("line " + std::to_string(lines[*bad]) + ": timestamp '" + timestamps[*bad] +
                          "' does not increase");
  }
  return PriceSeries(std::move(timestamps), std::move(prices));
}

PriceSeries load_prices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return load_prices(in);
}

ReturnSeries compute_returns(const PriceSeries& p) {
  const auto& px = p.prices();
  std::vector<double> r(px.size() - 1);
  for (std::size_t i = 0; i + 1 < px.size(); ++i) r[i] = std::log(px[i + 1]) - std::log(px[i]);
  return ReturnSeries(std::move(r));
}

ReturnSeries standardize(const ReturnSeries& r) {
  if (!(r.stdev() > 0.0)) throw ValidationError("cannot standardize a zero-variance series");
  const double m = r.mean();
  const double sd = r.stdev();
  std::vector<double> z(r.size());
  std::transform(r.values().begin(), r.values().end(), z.begin(), [&](double x) { return (x - m) / sd; });
  return ReturnSeries(std::move(z));
}

}  // namespace volclust

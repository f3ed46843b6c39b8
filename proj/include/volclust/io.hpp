#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "volclust/dvc.hpp"
#include "volclust/garch.hpp"
#include "volclust/ingest.hpp"
#include "volclust/symbolize.hpp"

namespace volclust {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

void write_prices_csv(std::ostream& out, const PriceSeries& prices);    // timestamp,price
void write_returns_csv(std::ostream& out, const ReturnSeries& r);       // index,return
void write_symbols_csv(std::ostream& out, const SymbolicSeries& s);     // index,symbol
void write_profile_csv(std::ostream& out, const DvcProfile& profile);   // s_value,abs_mean,count
void write_variances_csv(std::ostream& out, const GarchFit& fit);       // index,variance

Json to_json(const BinningScheme& scheme);
BinningScheme scheme_from_json(const Json& j);

Json to_json(const AnalysisConfig& config);
AnalysisConfig config_from_json(const Json& j);

/// {dvc_p, dvc_n, intercept_p, intercept_n, n_points_pos, n_points_neg,
///  profile: [{s_value, abs_mean, count}], config: {...}}
Json to_json(const DvcResult& result);

/// Inverse of to_json(DvcResult). Throws ValidationError on a malformed document.
DvcResult result_from_json(const Json& j);

/// {omega, alpha, beta, log_likelihood, converged}
Json to_json(const GarchFit& fit);

}  // namespace volclust

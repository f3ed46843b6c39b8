#include "volclust/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "volclust/dvc.hpp"
#include "volclust/error.hpp"
#include "volclust/garch.hpp"
#include "volclust/ingest.hpp"
#include "volclust/surrogate.hpp"

#ifndef VOLCLUST_VERSION
#define VOLCLUST_VERSION "0.0.0"
#endif

namespace volclust::cli {
namespace fs = std::filesystem;

namespace {

// Offset mixed into experiment seeds to derive the shuffle seed.
constexpr std::uint64_t kShuffleSeedOffset = 0x9E3779B97F4A7C15ULL;

// Failure carrying a pipeline stage tag and the exit code it maps to.
struct CommandError {
  std::string stage;
  std::string message;
  int code;
};

CommandError classify(const std::string& stage, const std::exception& e) {
  if (const auto* pe = dynamic_cast<const PipelineError*>(&e)) {
    return {stage + "/" + pe->stage(), e.what(), pe->numeric() ? kExitRuntime : kExitUsage};
  }
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) return {stage, e.what(), kExitUsage};
  return {stage, e.what(), kExitRuntime};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

double median(std::vector<double> xs) {
  if (xs.empty()) return std::nan("");
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct ConfigFlags {
  AnalysisConfig config;
  bool no_standardize = false;

  void attach(CLI::App& app) {
    app.add_option("--bins", config.n_bins, "Number of bins (odd, >= 3)")->capture_default_str();
    app.add_option("--clip-sigmas", config.clip_sigmas, "Bin range half-width in standard deviations")
        ->capture_default_str();
    app.add_option("--min-count", config.min_count, "Minimum transitions for a symbol to enter the fit")
        ->capture_default_str();
    app.add_flag("--no-standardize", no_standardize, "Bin the raw returns instead of standardized returns");
  }

  AnalysisConfig resolved() const {
    auto c = config;
    c.standardize_first = !no_standardize;
    return c;
  }
};

struct GarchFlags {
  double omega = 0.05;
  double alpha = 0.10;
  double beta = 0.85;

  void attach(CLI::App& app) {
    app.add_option("--omega", omega, "GARCH omega")->capture_default_str();
    app.add_option("--alpha", alpha, "GARCH alpha")->capture_default_str();
    app.add_option("--beta", beta, "GARCH beta")->capture_default_str();
  }

  Json to_json() const { return Json{{"omega", omega}, {"alpha", alpha}, {"beta", beta}}; }
};

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  fs::path input;
  fs::path out = "out";
  ConfigFlags flags;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const auto config = o.flags.resolved();
  std::string stage = "load_prices";
  try {
    const auto prices = load_prices(o.input);
    stage = "compute_returns";
    const auto returns = compute_returns(prices);
    stage = "analyze";
    const auto result = analyze(returns, config);

    stage = "write";
    std::ostringstream profile_csv;
    write_profile_csv(profile_csv, result.profile);
    write_text(o.out / "result.json", dump(to_json(result)));
    write_text(o.out / "profile.csv", profile_csv.str());
    write_text(o.out / "manifest.json",
               dump(make_manifest("analyze", Json{{"analysis", to_json(config)}, {"out", o.out.string()}}, {},
                                  {o.input})));
    out << "dvc_p " << format_double(result.dvc_p) << "\ndvc_n " << format_double(result.dvc_n) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    throw classify(stage, e);
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  GarchFlags garch;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  double scale = 0.001;
  double start_price = 100.0;
  fs::path out = "prices.csv";
};

PriceSeries prices_from_returns(const ReturnSeries& r, double scale, double start_price) {
  std::vector<std::string> ts(r.size() + 1);
  std::vector<double> px(r.size() + 1);
  double log_price = std::log(start_price);
  ts[0] = "0";
  px[0] = start_price;
  for (std::size_t i = 0; i < r.size(); ++i) {
    log_price += scale * r[i];
    ts[i + 1] = std::to_string(i + 1);
    px[i + 1] = std::exp(log_price);
  }
  return PriceSeries(std::move(ts), std::move(px));
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  std::string stage = "params";
  try {
    const GarchParams params(o.garch.omega, o.garch.alpha, o.garch.beta);
    if (!(o.scale > 0.0) || !(o.start_price > 0.0)) throw ValidationError("scale and start price must be positive");
    stage = "simulate";
    const auto returns = simulate(params, o.n, Seed{o.seed});
    const auto prices = prices_from_returns(returns, o.scale, o.start_price);

    stage = "write";
    std::ostringstream csv;
    write_prices_csv(csv, prices);
    write_text(o.out, csv.str());
    Json config = o.garch.to_json();
    config["n"] = o.n;
    config["scale"] = o.scale;
    config["start_price"] = o.start_price;
    config["out"] = o.out.string();
    fs::path manifest = o.out;
    manifest += ".manifest.json";
    write_text(manifest, dump(make_manifest("simulate", std::move(config), {o.seed}, {})));
    out << "wrote " << prices.size() << " prices to " << o.out.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    throw classify(stage, e);
  }
}

// ---------------------------------------------------------------- experiment

struct ExperimentOptions {
  std::string kind;
  std::size_t n = 100000;
  std::vector<std::uint64_t> seeds{1};
  GarchFlags garch;
  ConfigFlags flags;
  unsigned jobs = 1;
  fs::path out = "out";
};

Json dvc_pair(const DvcResult& r) { return Json{{"p", r.dvc_p}, {"n", r.dvc_n}}; }

Json run_experiment_seed(const ExperimentOptions& o, const GarchParams& params, const AnalysisConfig& config,
                         std::uint64_t seed) {
  Json row{{"seed", seed}};
  std::string stage = "simulate";
  try {
    const auto raw = simulate(params, o.n, Seed{seed});
    stage = "analyze_raw";
    const auto dvc_raw = analyze(raw, config);
    ReturnSeries transformed;
    if (o.kind == "surrogate") {
      stage = "shuffle";
      transformed = shuffle(raw, Seed{seed + kShuffleSeedOffset});
    } else {
      stage = "garch_fit";
      const auto g = fit(raw);
      row["garch_fit"] = to_json(g);
      stage = "garch_filter";
      transformed = filter(raw, g);
    }
    stage = "analyze_transformed";
    const auto dvc_t = analyze(transformed, config);
    row["dvc_raw"] = dvc_pair(dvc_raw);
    row["dvc_transformed"] = dvc_pair(dvc_t);
  } catch (const std::exception& e) {
    const auto ce = classify(stage, e);
    row["error"] = Json{{"stage", ce.stage}, {"message", ce.message}};
  }
  return row;
}

Json median_block(const std::vector<Json>& rows, const char* key) {
  std::vector<double> p, n, ap, an;
  for (const auto& row : rows) {
    if (!row.contains(key)) continue;
    const double vp = row[key]["p"].get<double>();
    const double vn = row[key]["n"].get<double>();
    p.push_back(vp);
    n.push_back(vn);
    ap.push_back(std::abs(vp));
    an.push_back(std::abs(vn));
  }
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  return Json{{"p", num(median(p))}, {"n", num(median(n))}, {"abs_p", num(median(ap))}, {"abs_n", num(median(an))}};
}

int cmd_experiment(const ExperimentOptions& o, std::ostream& out) {
  std::string stage = "config";
  try {
    if (o.kind != "surrogate" && o.kind != "garch-filter") {
      throw ValidationError("kind must be 'surrogate' or 'garch-filter'");
    }
    if (o.seeds.empty()) throw ValidationError("at least one seed is required");
    const auto config = o.flags.resolved();
    config.validate();
    const GarchParams params(o.garch.omega, o.garch.alpha, o.garch.beta);

    std::vector<Json> rows(o.seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < o.seeds.size(); i = next++) {
        rows[i] = run_experiment_seed(o, params, config, o.seeds[i]);
      }
    };
    const unsigned jobs = std::clamp<unsigned>(o.jobs, 1, static_cast<unsigned>(o.seeds.size()));
    {
      std::vector<std::jthread> pool;
      for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
      worker();
    }

    const auto ok = static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const Json& r) { return !r.contains("error"); }));
    Json doc{{"kind", o.kind},
             {"n", o.n},
             {"garch", o.garch.to_json()},
             {"analysis", to_json(config)},
             {"rows", rows},
             {"medians", Json{{"dvc_raw", median_block(rows, "dvc_raw")},
                              {"dvc_transformed", median_block(rows, "dvc_transformed")},
                              {"n_ok", ok}}}};

    stage = "write";
    Json manifest_config{{"kind", o.kind},
                         {"n", o.n},
                         {"garch", o.garch.to_json()},
                         {"analysis", to_json(config)},
                         {"out", o.out.string()}};
    write_text(o.out / "comparison.json", dump(doc));
    write_text(o.out / "manifest.json", dump(make_manifest("experiment", std::move(manifest_config), o.seeds, {})));

    const auto& med = doc["medians"];
    out << o.kind << ": " << ok << "/" << rows.size() << " seeds ok\n"
        << "median |dvc_p| raw " << med["dvc_raw"]["abs_p"].dump() << " transformed "
        << med["dvc_transformed"]["abs_p"].dump() << '\n'
        << "median |dvc_n| raw " << med["dvc_raw"]["abs_n"].dump() << " transformed "
        << med["dvc_transformed"]["abs_n"].dump() << '\n';
    if (ok == 0) {
      throw CommandError{"experiment", "all seeds failed", kExitRuntime};
    }
    return kExitOk;
  } catch (const CommandError&) {
    throw;
  } catch (const std::exception& e) {
    throw classify(stage, e);
  }
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  std::vector<fs::path> inputs;
  std::optional<fs::path> out;
};

struct ReportRow {
  std::string input;
  std::string status = "ok";
  DvcResult result;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
  std::vector<ReportRow> rows;
  for (const auto& path : o.inputs) {
    ReportRow row;
    row.input = path.string();
    try {
      std::ifstream f(path);
      if (!f) throw ValidationError("cannot open file");
      Json j;
      try {
        j = Json::parse(f);
      } catch (const Json::exception& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
      }
      row.result = result_from_json(j);
    } catch (const std::exception& e) {
      row.status = std::string("invalid: ") + e.what();
    }
    rows.push_back(std::move(row));
  }

  const auto valid = std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return r.status == "ok"; });

  std::ostringstream csv;
  csv << "input,status,dvc_p,dvc_n,abs_dvc_n,n_points_pos,n_points_neg\n";
  for (const auto& r : rows) {
    csv << csv_field(r.input) << ',' << csv_field(r.status);
    if (r.status == "ok") {
      csv << ',' << format_double(r.result.dvc_p) << ',' << format_double(r.result.dvc_n) << ','
          << format_double(std::abs(r.result.dvc_n)) << ',' << r.result.n_points_pos << ','
          << r.result.n_points_neg;
    } else {
      csv << ",,,,,";
    }
    csv << '\n';
  }

  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.input.size());
  out << std::left << std::setw(static_cast<int>(width)) << "input" << "  " << std::right << std::setw(10)
      << "dvc_p" << std::setw(10) << "dvc_n" << std::setw(10) << "|dvc_n|" << std::setw(6) << "n+" << std::setw(6)
      << "n-" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.input << "  " << std::right;
    if (r.status == "ok") {
      out << std::fixed << std::setprecision(4) << std::setw(10) << r.result.dvc_p << std::setw(10) << r.result.dvc_n
          << std::setw(10) << std::abs(r.result.dvc_n) << std::setw(6) << r.result.n_points_pos << std::setw(6)
          << r.result.n_points_neg << std::defaultfloat << '\n';
    } else {
      out << r.status << '\n';
    }
  }

  if (o.out) {
    std::vector<fs::path> readable;
    for (const auto& p : o.inputs) {
      if (fs::is_regular_file(p)) readable.push_back(p);
    }
    try {
      write_text(*o.out / "report.csv", csv.str());
      write_text(*o.out / "manifest.json",
                 dump(make_manifest("report", Json{{"out", o.out->string()}}, {}, readable)));
    } catch (const std::exception& e) {
      throw classify("write", e);
    }
  }
  if (valid == 0) throw CommandError{"report", "no valid result files", kExitUsage};
  return kExitOk;
}

// Expands `--config FILE` into flags placed right after the subcommand name.
// Keys already given on the command line are skipped, so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.empty()) return args;
  std::optional<std::string> file;
  std::vector<std::string> rest{args.front()};
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[++i];
    } else if (args[i].starts_with("--config=")) {
      file = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!file) return args;

  std::ifstream in(*file);
  if (!in) throw CLI::FileError::Missing(*file);
  const auto items = CLI::ConfigTOML().from_config(in);

  auto given = [&](const std::string& name) {
    const std::string flag = "--" + name;
    return std::any_of(rest.begin() + 1, rest.end(),
                       [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
  };
  std::vector<std::string> injected;
  for (const auto& item : items) {
    if (!item.parents.empty() && item.parents != std::vector<std::string>{rest.front()}) continue;
    if (item.name.empty() || item.name == "++" || item.name == "--" || given(item.name)) continue;
    if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
      if (item.inputs[0] == "true") injected.push_back("--" + item.name);
      continue;
    }
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    injected.push_back("--" + item.name);
    injected.push_back(joined);
  }
  rest.insert(rest.begin() + 1, injected.begin(), injected.end());
  return rest;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 init failed");
  }
  std::vector<char> buf(1 << 16);
  while (f) {
    f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (f.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  char byte[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

Json make_manifest(const std::string& command, Json config, const std::vector<std::uint64_t>& seeds,
                   const std::vector<fs::path>& inputs) {
  Json in = Json::array();
  for (const auto& p : inputs) in.push_back(Json{{"path", p.string()}, {"sha256", sha256_file(p)}});
  return Json{{"command", command},
              {"version", VOLCLUST_VERSION},
              {"config", std::move(config)},
              {"seeds", seeds},
              {"inputs", std::move(in)}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volatility clustering analysis of return series", "volclust"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VOLCLUST_VERSION);

  std::string config_file;  // consumed by expand_config before parsing

  AnalyzeOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Measure clustering degrees of a price CSV");
  analyze_cmd->add_option("--config", config_file, "key=value config file; flags override it");
  analyze_cmd->add_option("input", analyze_opts.input, "Price CSV with header timestamp,price")
      ->required()
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out", analyze_opts.out, "Output directory")->capture_default_str();
  analyze_opts.flags.attach(*analyze_cmd);

  SimulateOptions sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a GARCH(1,1) price path as CSV");
  sim_cmd->add_option("--config", config_file, "key=value config file; flags override it");
  sim_opts.garch.attach(*sim_cmd);
  sim_cmd->add_option("-n,--n", sim_opts.n, "Number of returns")->capture_default_str();
  sim_cmd->add_option("--seed", sim_opts.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--scale", sim_opts.scale, "Multiplier applied to returns before building prices")
      ->capture_default_str();
  sim_cmd->add_option("--start-price", sim_opts.start_price, "First price")->capture_default_str();
  sim_cmd->add_option("--out", sim_opts.out, "Output CSV path")->capture_default_str();

  ExperimentOptions exp_opts;
  auto* exp_cmd = app.add_subcommand("experiment", "Compare raw GARCH series with shuffled or filtered versions");
  exp_cmd->add_option("--config", config_file, "key=value config file; flags override it");
  exp_cmd->add_option("--kind", exp_opts.kind, "surrogate | garch-filter")
      ->required()
      ->check(CLI::IsMember({"surrogate", "garch-filter"}));
  exp_cmd->add_option("-n,--n", exp_opts.n, "Series length per seed")->capture_default_str();
  exp_cmd->add_option("--seeds,--seed", exp_opts.seeds, "Comma-separated seeds")->delimiter(',');
  exp_cmd->add_option("--jobs", exp_opts.jobs, "Seeds evaluated concurrently")->capture_default_str();
  exp_cmd->add_option("--out", exp_opts.out, "Output directory")->capture_default_str();
  exp_opts.garch.attach(*exp_cmd);
  exp_opts.flags.attach(*exp_cmd);

  ReportOptions report_opts;
  auto* report_cmd = app.add_subcommand("report", "Tabulate result.json files");
  report_cmd->add_option("inputs", report_opts.inputs, "result.json files")->required();
  report_cmd->add_option("--out", report_opts.out, "Directory for report.csv and manifest.json");

  try {
    const auto expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_opts, out);
    if (*sim_cmd) return cmd_simulate(sim_opts, out);
    if (*exp_cmd) return cmd_experiment(exp_opts, out);
    if (*report_cmd) return cmd_report(report_opts, out);
  } catch (const CommandError& e) {
    err << "error [" << e.stage << "]: " << e.message << '\n';
    return e.code;
  }
  return kExitUsage;
}

}  // namespace volclust::cli

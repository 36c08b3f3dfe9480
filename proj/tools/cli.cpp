#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tailnorm/appfit.hpp"
#include "tailnorm/error.hpp"
#include "tailnorm/estimators.hpp"
#include "tailnorm/normtest.hpp"
#include "tailnorm/simlab.hpp"

namespace tailnorm::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kManifestName = "run-manifest.ini";
constexpr std::uint64_t kDefaultSeed = 20111231;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolved key-value settings of one command. Values are kept as text so the
// manifest can reproduce them verbatim.
class Settings {
 public:
  Settings(std::string command, std::map<std::string, std::string> defaults)
      : command_(std::move(command)), values_(std::move(defaults)) {}

  void set(const std::string& key, std::string value) {
    if (!values_.count(key)) throw ConfigError("unknown key '" + key + "' for command " + command_);
    values_[key] = std::move(value);
  }

  const std::string& str(const std::string& key) const { return values_.at(key); }
  bool empty(const std::string& key) const { return values_.at(key).empty(); }

  double real(const std::string& key) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(str(key), &used);
      if (used == str(key).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "' expects a number, got '" + str(key) + "'");
  }

  std::uint64_t u64(const std::string& key) const {
    const std::string& s = str(key);
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
      try {
        return std::stoull(s);
      } catch (const std::exception&) {
      }
    }
    throw ConfigError("key '" + key + "' expects a nonnegative integer, got '" + s + "'");
  }

  std::size_t count(const std::string& key) const { return static_cast<std::size_t>(u64(key)); }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    if (out.empty()) throw ConfigError("key '" + key + "' expects a comma-separated list");
    return out;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : list(key)) {
      Settings one(command_, {{key, s}});
      out.push_back(one.real(key));
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& s : list(key)) {
      Settings one(command_, {{key, s}});
      out.push_back(one.count(key));
    }
    return out;
  }

  std::vector<Method> methods(const std::string& key) const {
    std::vector<Method> out;
    try {
      for (const auto& s : list(key)) out.push_back(parse_method(s));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    return out;
  }

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  int threads = 0;
  bool verbose = false;
};

// Overrides collected from command-line flags, applied after the config file.
using Overrides = std::map<std::string, std::string>;

void load_config(Settings& s, const std::string& path) {
  if (path.empty()) return;
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot parse config " + path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const auto section = tree.get_child_optional(s.command());
  if (!section) return;
  for (const auto& [key, node] : *section) s.set(key, node.get_value<std::string>());
}

void apply_overrides(Settings& s, const Overrides& o) {
  for (const auto& [k, v] : o) s.set(k, v);
}

std::string absolute_path(const std::string& p) { return p.empty() ? p : fs::absolute(p).lexically_normal().string(); }

std::string manifest_text(const Settings& s) {
  std::string text = "; tailnorm run manifest: rerun with `tailnorm " + s.command() + " --config <this file>`\n";
  text += "[run]\ncommand = " + s.command() + "\n\n[" + s.command() + "]\n";
  for (const auto& [k, v] : s.values()) text += k + " = " + v + "\n";
  return text;
}

// Output files are assembled in memory and written together with the manifest.
using Outputs = std::vector<std::pair<fs::path, std::string>>;

void write_outputs(const fs::path& dir, const Outputs& files, const Settings& s) {
  fs::create_directories(dir);
  for (const auto& [name, text] : files) {
    const fs::path target = name.is_absolute() ? name : dir / name;
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + target.string());
    f << text;
    if (!f) throw std::runtime_error("failed writing " + target.string());
  }
  std::ofstream m(dir / kManifestName, std::ios::binary);
  m << manifest_text(s);
  if (!m) throw std::runtime_error("cannot write manifest in " + dir.string());
}

ExecPolicy policy(const Common& c) { return ExecPolicy{true, c.threads}; }

std::string num(double v) { return fmt::format("{}", v); }

json settings_json(const Settings& s) {
  json j = json::object();
  for (const auto& [k, v] : s.values()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Settings& s, const Common& c, std::ostream& out, std::ostream& err) {
  const auto xis = s.reals("xi");
  std::string csv = "xi0,sigma0,mu0,n,method,jb_pvalue,lilliefors_pvalue,t_pvalue,t_stat,skewness,kurtosis,mean_est,bias,mse,m_used,failed\n";
  std::string txt;
  json cells = json::array();
  for (double xi : xis) {
    ExperimentConfig cfg;
    cfg.xi0 = xi;
    cfg.sigma0 = s.real("sigma");
    cfg.mu0 = s.real("mu");
    cfg.sample_sizes = s.counts("sample_sizes");
    cfg.methods = s.methods("methods");
    cfg.m = s.count("m");
    cfg.mc_pvalue_reps = s.count("mc_pvalue_reps");
    cfg.master_seed = s.u64("seed");
    if (c.verbose) err << "simulate: xi0 = " << xi << "\n";
    const auto results = run_normality_grid(cfg, policy(c));

    txt += fmt::format("xi = {}, sigma = {}, mu = {}, m = {}\n", xi, cfg.sigma0, cfg.mu0, cfg.m);
    txt += fmt::format("{:>6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>9} {:>9}\n", "n", "method", "JB p", "Lillie p",
                       "t p", "t", "skew", "kurt");
    for (const CellResult& r : results) {
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(xi), num(cfg.sigma0), num(cfg.mu0), r.n,
                         to_string(r.method), num(r.jb_pvalue), num(r.lilliefors_pvalue), num(r.t_pvalue),
                         num(r.t_stat), num(r.skewness), num(r.kurtosis), num(r.summary.mean_est), num(r.summary.bias),
                         num(r.summary.mse), r.summary.m, r.failed);
      txt += fmt::format("{:>6} {:>6} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4f} {:>9.4f} {:>9.4f}\n", r.n,
                         to_string(r.method), r.jb_pvalue, r.lilliefors_pvalue, r.t_pvalue, r.t_stat, r.skewness,
                         r.kurtosis);
      cells.push_back({{"xi0", xi},
                       {"n", r.n},
                       {"method", to_string(r.method)},
                       {"jb_pvalue", r.jb_pvalue},
                       {"lilliefors_pvalue", r.lilliefors_pvalue},
                       {"t_stat", r.t_stat},
                       {"t_pvalue", r.t_pvalue},
                       {"skewness", r.skewness},
                       {"kurtosis", r.kurtosis},
                       {"summary",
                        {{"m", r.summary.m},
                         {"theta0", r.summary.theta0},
                         {"mean_est", r.summary.mean_est},
                         {"S2", r.summary.S2},
                         {"bias", r.summary.bias},
                         {"mse", r.summary.mse},
                         {"t", r.summary.t},
                         {"z_pvalue", r.summary.z_pvalue}}},
                       {"failed", r.failed}});
    }
    txt += "\n";
  }
  const json result{{"command", "simulate"}, {"config", settings_json(s)}, {"cells", cells}};
  write_outputs(c.out, {{"normality.csv", csv}, {"normality.txt", txt}, {"results.json", result.dump(2) + "\n"}}, s);
  out << txt;
  return 0;
}

// ---------------------------------------------------------------- reject

int cmd_reject(const Settings& s, const Common& c, std::ostream& out, std::ostream& err) {
  std::string csv = "xi0,sigma0,mu0,n,mean_z,var_z,pct_rejected,reject_rate,used,failed\n";
  std::string txt;
  json rows = json::array();
  for (double xi : s.reals("xi")) {
    ExperimentConfig cfg;
    cfg.xi0 = xi;
    cfg.sigma0 = s.real("sigma");
    cfg.mu0 = s.real("mu");
    cfg.sample_sizes = s.counts("sample_sizes");
    cfg.methods = {Method::ZS};
    cfg.m = s.count("m");
    cfg.bootstrap_reps = s.count("bootstrap_reps");
    cfg.master_seed = s.u64("seed");
    if (c.verbose) err << "reject: xi0 = " << xi << "\n";
    const auto results = run_rejection_study(cfg, policy(c));
    txt += fmt::format("xi0 = {}, sigma = {}: ZS estimate, bootstrap sd ({} resamples), m = {}\n", xi, cfg.sigma0,
                       cfg.bootstrap_reps, cfg.m);
    txt += fmt::format("{:>6} {:>10} {:>10} {:>10}\n", "n", "mean z", "var z", "% reject");
    for (const RejectionResult& r : results) {
      const double pct = 100.0 * r.reject_rate;
      csv += fmt::format("{},{},{},{},{},{},{:.1f},{},{},{}\n", num(xi), num(cfg.sigma0), num(cfg.mu0), r.n,
                         num(r.mean_z), num(r.var_z), pct, num(r.reject_rate), r.used, r.failed);
      txt += fmt::format("{:>6} {:>10.4f} {:>10.4f} {:>10.1f}\n", r.n, r.mean_z, r.var_z, pct);
      rows.push_back({{"xi0", xi},
                      {"n", r.n},
                      {"mean_z", r.mean_z},
                      {"var_z", r.var_z},
                      {"reject_rate", r.reject_rate},
                      {"used", r.used},
                      {"failed", r.failed}});
    }
    txt += "\n";
  }
  const json result{{"command", "reject"}, {"config", settings_json(s)}, {"rows", rows}};
  write_outputs(c.out, {{"rejection.csv", csv}, {"rejection.txt", txt}, {"results.json", result.dump(2) + "\n"}}, s);
  out << txt;
  return 0;
}

// ---------------------------------------------------------------- audit

int cmd_audit(const Settings& s, const Common& c, std::ostream& out, std::ostream&) {
  if (s.empty("input")) throw ConfigError("audit needs an input file (--input)");
  const auto rows = read_audit_csv(s.str("input"));
  std::optional<std::size_t> target;
  if (!s.empty("m_target")) target = s.count("m_target");
  const auto results = audit_published(rows, target);

  std::string csv = target ? "label,n,bias,rmse,m,z,z_star\n" : "label,n,bias,rmse,m,z\n";
  std::string txt = fmt::format("{:>8} {:>6} {:>8} {:>8} {:>12}", "label", "n", "bias", "rmse", "z");
  txt += target ? fmt::format(" {:>12}\n", "z*") : "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& r = results[i];
    csv += fmt::format("{},{},{},{},{},{}", row.label, row.n, num(row.bias), num(row.rmse), row.m, num(r.z));
    txt += fmt::format("{:>8} {:>6} {:>8} {:>8} {:>12.4f}", row.label, row.n, row.bias, row.rmse, r.z);
    if (target) {
      csv += "," + num(*r.z_star);
      txt += fmt::format(" {:>12.4f}", *r.z_star);
    }
    csv += "\n";
    txt += "\n";
  }
  write_outputs(c.out, {{"audit.csv", csv}, {"audit.txt", txt}}, s);
  out << txt;
  return 0;
}

// ---------------------------------------------------------------- fit

json record_json(const EstimateRecord& r) {
  return {{"method", to_string(r.method)}, {"xi", r.xi_hat}, {"sigma", r.sigma_hat}, {"converged", r.converged}};
}

int cmd_fit(const Settings& s, const Common& c, const std::string& pp_out, std::ostream& out, std::ostream& err) {
  if (s.empty("prices")) throw ConfigError("fit needs a price file (--prices)");
  if (!s.empty("top_k") && !s.empty("threshold")) {
    throw ConfigError("top_k and threshold are mutually exclusive");
  }
  const auto prices = load_price_csv(s.str("prices"), {s.str("date_column"), s.str("close_column")});
  const auto returns = log_returns(prices);
  ExceedanceRule rule = TopK{150};
  if (!s.empty("threshold")) {
    rule = Threshold{s.real("threshold")};
  } else if (!s.empty("top_k")) {
    rule = TopK{s.count("top_k")};
  }
  const Exceedances tail = exceedances(returns.returns, rule);
  if (c.verbose) err << "fit: " << tail.excesses.size() << " excesses over " << tail.threshold << "\n";

  const Method method = s.methods("method").at(0);
  Stream rng(s.u64("seed"));
  const TailFit tf = fit_tail(tail, method, s.count("boot_reps"), rng, s.real("confidence"), policy(c));
  const GpdParams fitted{tf.xi_hat, tf.sigma_hat, 0.0};

  std::string pp = "empirical,model\n";
  if (fitted.xi > 0.0) {
    for (const auto& [e, m] : pp_plot_data(tail.excesses, fitted)) pp += num(e) + "," + num(m) + "\n";
  } else {
    err << "warning: fitted shape is not positive; P-P data left empty\n";
  }

  json fits = json::array();
  for (const auto& r : tf.fits) fits.push_back(record_json(r));
  const json result{{"command", "fit"},
                    {"config", settings_json(s)},
                    {"returns", returns.returns.size()},
                    {"threshold", tf.threshold},
                    {"k", tf.k},
                    {"method", to_string(tf.method)},
                    {"fits", fits},
                    {"xi_hat", tf.xi_hat},
                    {"sigma_hat", tf.sigma_hat},
                    {"bootstrap_reps", tf.bootstrap_reps},
                    {"bootstrap_sd", tf.bootstrap_sd},
                    {"confidence", tf.confidence},
                    {"ci", {tf.ci95.lo, tf.ci95.hi}},
                    {"index_lower_bound", std::isfinite(tf.index_lower_bound) ? json(tf.index_lower_bound) : json()}};

  std::string txt = fmt::format("{} log returns, threshold {:.6f}, {} excesses\n", returns.returns.size(),
                                tf.threshold, tf.k);
  for (const auto& r : tf.fits) {
    txt += fmt::format("  {:<4} xi = {:.4f}  sigma = {:.6f}{}\n", to_string(r.method), r.xi_hat, r.sigma_hat,
                       r.converged ? "" : "  (not converged)");
  }
  txt += fmt::format("{} bootstrap sd of xi ({} resamples): {:.4f}\n", to_string(tf.method), tf.bootstrap_reps,
                     tf.bootstrap_sd);
  txt += fmt::format("{:.0f}% interval for xi: [{:.4f}, {:.4f}]\n", 100.0 * tf.confidence, tf.ci95.lo, tf.ci95.hi);
  txt += std::isfinite(tf.index_lower_bound) ? fmt::format("tail index is at least {:.4f}\n", tf.index_lower_bound)
                                             : std::string("tail index is unbounded above\n");

  Outputs files{{"tailfit.json", result.dump(2) + "\n"}, {"fit.txt", txt}};
  files.emplace_back(pp_out.empty() ? fs::path("pp.csv") : fs::absolute(pp_out), pp);
  write_outputs(c.out, files, s);
  out << txt;
  return 0;
}

// ---------------------------------------------------------------- normtest

std::vector<double> read_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> col;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      if (!column.empty()) {
        for (std::size_t i = 0; i < cells.size(); ++i)
          if (cells[i] == column) col = i;
        if (!col) throw ParseError("header has no column '" + column + "'", lineno);
        continue;
      }
      col = 0;
      try {
        std::size_t used = 0;
        std::stod(cells.at(0), &used);
      } catch (const std::exception&) {
        continue;  // header row
      }
    }
    if (*col >= cells.size()) throw ParseError("row is missing the value column", lineno);
    try {
      std::size_t used = 0;
      const double v = std::stod(cells[*col], &used);
      if (cells[*col].find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v)) throw std::exception();
      values.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("value '" + cells[*col] + "' is not numeric", lineno);
    }
  }
  return values;
}

int cmd_normtest(const Settings& s, const Common& c, std::ostream& out, std::ostream&) {
  if (s.empty("input")) throw ConfigError("normtest needs an input file (--input)");
  const auto xs = read_column(s.str("input"), s.str("column"));
  const std::size_t reps = s.count("mc_reps");
  Stream rng(s.u64("seed"));
  std::vector<NormalityReport> reports;
  reports.push_back(jarque_bera(xs, PValueMethod::MonteCarlo, reps, rng));
  reports.push_back(jarque_bera(xs, PValueMethod::Asymptotic, reps, rng));
  reports.push_back(lilliefors(xs, reps, rng));
  json summary;
  if (!s.empty("theta0")) {
    const SimulationSummary sm = mse_bias_summary(xs, s.real("theta0"));
    reports.push_back(mse_bias_report(sm));
    summary = {{"m", sm.m},       {"theta0", sm.theta0}, {"mean_est", sm.mean_est}, {"S2", sm.S2},
               {"bias", sm.bias}, {"mse", sm.mse},       {"t", sm.t},               {"z_pvalue", sm.z_pvalue}};
  }
  const Moments mo = moment_stats(xs);

  std::string csv = "test,statistic,pvalue,pvalue_method,n\n";
  std::string txt = fmt::format("n = {}, mean = {:.6g}, variance = {:.6g}, skewness = {:.4f}, kurtosis = {:.4f}\n",
                                xs.size(), mo.mean, mo.variance, mo.skewness, mo.kurtosis);
  json tests = json::array();
  for (const auto& r : reports) {
    csv += fmt::format("{},{},{},{},{}\n", to_string(r.method), num(r.statistic), num(r.pvalue),
                       to_string(r.pvalue_method), r.n);
    txt += fmt::format("  {:<11} {:<11} statistic = {:10.4f}  p = {:.4f}\n", to_string(r.method),
                       to_string(r.pvalue_method), r.statistic, r.pvalue);
    tests.push_back({{"test", to_string(r.method)},
                     {"statistic", r.statistic},
                     {"pvalue", r.pvalue},
                     {"pvalue_method", to_string(r.pvalue_method)},
                     {"n", r.n}});
  }
  json result{{"command", "normtest"},
              {"config", settings_json(s)},
              {"moments", {{"mean", mo.mean}, {"variance", mo.variance}, {"skewness", mo.skewness}, {"kurtosis", mo.kurtosis}}},
              {"tests", tests}};
  if (!summary.is_null()) result["summary"] = summary;
  write_outputs(c.out, {{"normtest.csv", csv}, {"normtest.json", result.dump(2) + "\n"}}, s);
  out << txt;
  return 0;
}

// ---------------------------------------------------------------- wiring

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Key-value config file (section named after the command)");
  sub->add_option("--seed", c.seed, "Master seed (unsigned 64-bit)");
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = all); results do not depend on it")
      ->check(CLI::NonNegativeNumber);
  sub->add_flag("-v,--verbose", c.verbose, "Progress messages on stderr");
}

// Registers --flag bound to a settings key.
void add_key(CLI::App* sub, Overrides& o, const std::string& flag, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(flag, [&o, key](const std::string& v) { o[key] = v; }, help);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Pareto shape estimators: normality studies and tail confidence intervals", "tailnorm"};
  app.require_subcommand(1);
  Common common;
  Overrides overrides;
  std::string pp_out;

  auto* simulate = app.add_subcommand("simulate", "Normality of the shape estimators over a sample-size grid");
  add_common(simulate, common);
  add_key(simulate, overrides, "--xi", "xi", "True shape values, comma separated");
  add_key(simulate, overrides, "--sigma", "sigma", "True scale");
  add_key(simulate, overrides, "--mu", "mu", "True location");
  add_key(simulate, overrides, "--sizes", "sample_sizes", "Sample sizes, comma separated");
  add_key(simulate, overrides, "--methods", "methods", "Estimators: pwm,zs,ml");
  add_key(simulate, overrides, "--m", "m", "Replicates per cell");
  add_key(simulate, overrides, "--mc-reps", "mc_pvalue_reps", "Monte Carlo null replicates for JB/Lilliefors");

  auto* reject = app.add_subcommand("reject", "Rejection rate of the bootstrap z-test under the true hypothesis");
  add_common(reject, common);
  add_key(reject, overrides, "--xi", "xi", "True shape values, comma separated");
  add_key(reject, overrides, "--sigma", "sigma", "True scale");
  add_key(reject, overrides, "--mu", "mu", "True location");
  add_key(reject, overrides, "--sizes", "sample_sizes", "Sample sizes, comma separated");
  add_key(reject, overrides, "--m", "m", "Replicates per cell");
  add_key(reject, overrides, "--boot-reps", "bootstrap_reps", "Bootstrap resamples per replicate");

  auto* audit = app.add_subcommand("audit", "z statistics from published bias and RMSE");
  add_common(audit, common);
  add_key(audit, overrides, "--input", "input", "CSV with header label,n,bias,rmse,m");
  add_key(audit, overrides, "--m-target", "m_target", "Rescale z to this many replicates (z*)");

  auto* fit = app.add_subcommand("fit", "Tail fit and bootstrap interval for the shape of a price series");
  add_common(fit, common);
  add_key(fit, overrides, "--prices", "prices", "Price CSV with a header row");
  add_key(fit, overrides, "--date-column", "date_column", "Date column name");
  add_key(fit, overrides, "--close-column", "close_column", "Closing price column name");
  auto* top_k = fit->add_option_function<std::string>(
      "--top-k", [&overrides](const std::string& v) { overrides["top_k"] = v; overrides["threshold"] = ""; },
      "Use the k largest returns");
  auto* threshold = fit->add_option_function<std::string>(
      "--threshold", [&overrides](const std::string& v) { overrides["threshold"] = v; overrides["top_k"] = ""; },
      "Use returns above this threshold");
  top_k->excludes(threshold);
  add_key(fit, overrides, "--method", "method", "Estimator for the interval: pwm|ml|zs");
  add_key(fit, overrides, "--boot-reps", "boot_reps", "Bootstrap resamples");
  add_key(fit, overrides, "--confidence", "confidence", "Confidence level");
  fit->add_option("--pp-out", pp_out, "P-P plot data file (default <out>/pp.csv)");

  auto* normtest = app.add_subcommand("normtest", "Normality tests on a column of numbers");
  add_common(normtest, common);
  add_key(normtest, overrides, "--input", "input", "File with one number per line (or CSV with --column)");
  add_key(normtest, overrides, "--column", "column", "Column name in a CSV input");
  add_key(normtest, overrides, "--theta0", "theta0", "True parameter: adds the MSE/bias t-test");
  add_key(normtest, overrides, "--mc-reps", "mc_reps", "Monte Carlo null replicates");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const std::string seed = std::to_string(kDefaultSeed);
  try {
    std::optional<Settings> settings;
    if (simulate->parsed()) {
      settings.emplace("simulate", std::map<std::string, std::string>{{"xi", "0.25,0.5,0.75"},
                                                                      {"sigma", "1"},
                                                                      {"mu", "1"},
                                                                      {"sample_sizes", "25,50,100,250,500"},
                                                                      {"methods", "pwm,zs,ml"},
                                                                      {"m", "1000"},
                                                                      {"mc_pvalue_reps", "10000"},
                                                                      {"seed", seed}});
    } else if (reject->parsed()) {
      settings.emplace("reject", std::map<std::string, std::string>{{"xi", "0.2,0.4,0.6"},
                                                                    {"sigma", "1"},
                                                                    {"mu", "1"},
                                                                    {"sample_sizes", "15,50,100,150,250"},
                                                                    {"m", "1000"},
                                                                    {"bootstrap_reps", "1000"},
                                                                    {"seed", seed}});
    } else if (audit->parsed()) {
      settings.emplace("audit", std::map<std::string, std::string>{{"input", ""}, {"m_target", ""}});
    } else if (fit->parsed()) {
      settings.emplace("fit", std::map<std::string, std::string>{{"prices", ""},
                                                                 {"date_column", "Date"},
                                                                 {"close_column", "Close"},
                                                                 {"top_k", "150"},
                                                                 {"threshold", ""},
                                                                 {"method", "zs"},
                                                                 {"boot_reps", "1000"},
                                                                 {"confidence", "0.95"},
                                                                 {"seed", seed}});
    } else {
      settings.emplace("normtest", std::map<std::string, std::string>{
                                       {"input", ""}, {"column", ""}, {"theta0", ""}, {"mc_reps", "10000"}, {"seed", seed}});
    }
    Settings& s = *settings;
    load_config(s, common.config);
    // A config-file rule is replaced wholesale by a command-line rule.
    if (fit->parsed() && (overrides.count("top_k") || overrides.count("threshold"))) {
      s.set("top_k", "");
      s.set("threshold", "");
    }
    apply_overrides(s, overrides);
    if (common.seed && s.values().count("seed")) s.set("seed", std::to_string(*common.seed));
    for (const char* key : {"input", "prices"})
      if (s.values().count(key)) s.set(key, absolute_path(s.str(key)));

    if (simulate->parsed()) return cmd_simulate(s, common, out, err);
    if (reject->parsed()) return cmd_reject(s, common, out, err);
    if (audit->parsed()) return cmd_audit(s, common, out, err);
    if (fit->parsed()) return cmd_fit(s, common, pp_out, out, err);
    return cmd_normtest(s, common, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tailnorm::cli

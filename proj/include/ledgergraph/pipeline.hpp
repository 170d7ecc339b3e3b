#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ledgergraph/error.hpp"
#include "ledgergraph/fetch.hpp"
#include "ledgergraph/graph.hpp"
#include "ledgergraph/metrics.hpp"
#include "ledgergraph/nullmodel.hpp"
#include "ledgergraph/pajek.hpp"
#include "ledgergraph/records.hpp"
#include "ledgergraph/timeutil.hpp"

namespace ledgergraph::pipeline {

namespace fs = std::filesystem;

enum class Command { fetch, build, analyze, compare, report };

enum ExitCode : int { kOk = 0, kUsage = 1, kFetchFailure = 2, kDataFailure = 3 };

struct RunConfig {
  Command command = Command::analyze;
  std::optional<Ledger> ledger;
  std::optional<Interval> interval;
  unsigned workers = 1;
  double sample_fraction = 0.10;
  std::uint64_t seed = 0;
  ComponentChoice component = ComponentChoice::weak_main;
  bool undirected = false;
  ClusteringMode clustering = ClusteringMode::undirected;
  std::size_t hubs = 10;
  bool labels = false;   // build: write address labels into the Pajek file
  bool timings = false;  // analyze/compare: embed phase timings in the JSON
  fs::path input;
  fs::path output;
  fs::path stats;        // ingestion stats; defaults to <pajek>.stats.json
  fs::path plot_prefix;  // analyze: degree tables; defaults to the output path without extension
  fs::path config_file;
};

// Environment lookups go through this hook so tests can inject values.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v && *v) return std::string(v);
  return std::nullopt;
}

struct Settings {
  fetch::Endpoint endpoint;
  fetch::BackoffPolicy backoff;
};

/// Endpoint and backoff settings for `ledger`: environment variables
/// `LEDGERGRAPH_<LEDGER>_URL` / `_KEY` override the JSON config file, which
/// overrides built-in defaults.
inline Settings resolve_settings(Ledger ledger, const fs::path& config_file, const EnvLookup& env = process_env) {
  Settings s;
  s.endpoint.base_url = fetch::default_base_url(ledger);
  if (ledger == Ledger::dogecoin) s.endpoint.key_header = "API-KEY";
  const std::string name(to_string(ledger));
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw std::runtime_error("cannot read config file " + config_file.string());
    const auto cfg = nlohmann::json::parse(in);
    if (auto eps = cfg.find("endpoints"); eps != cfg.end() && eps->contains(name)) {
      const auto& ep = (*eps)[name];
      s.endpoint.base_url = ep.value("url", s.endpoint.base_url);
      s.endpoint.api_key = ep.value("key", s.endpoint.api_key);
      s.endpoint.key_header = ep.value("key_header", s.endpoint.key_header);
    }
    if (auto b = cfg.find("backoff"); b != cfg.end()) {
      s.backoff.initial = fetch::milliseconds(b->value("initial_ms", s.backoff.initial.count()));
      s.backoff.cap = fetch::milliseconds(b->value("cap_ms", s.backoff.cap.count()));
      s.backoff.max_retries = b->value("max_retries", s.backoff.max_retries);
    }
  }
  std::string upper = name;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (auto url = env("LEDGERGRAPH_" + upper + "_URL")) s.endpoint.base_url = *url;
  if (auto key = env("LEDGERGRAPH_" + upper + "_KEY")) s.endpoint.api_key = *key;
  return s;
}

namespace detail {

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

inline DirectedGraph read_graph(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return pajek::read(in);
}

inline fs::path stats_path_for(const RunConfig& cfg, const fs::path& pajek_path) {
  return cfg.stats.empty() ? fs::path(pajek_path.string() + ".stats.json") : cfg.stats;
}

inline AnalysisOptions analysis_options(const RunConfig& cfg) {
  AnalysisOptions o;
  o.plan = {cfg.sample_fraction, cfg.seed, cfg.component, cfg.undirected};
  o.workers = cfg.workers;
  o.hub_count = cfg.hubs;
  o.clustering = cfg.clustering;
  return o;
}

inline void log_phases(std::ostream& err, const std::string& scope,
                       const std::vector<std::pair<std::string, double>>& phases) {
  for (const auto& [phase, seconds] : phases)
    err << scope << ' ' << phase << ": " << std::fixed << std::setprecision(3) << seconds << " s\n";
  err.unsetf(std::ios::floatfield);
}

// Real graphs whose main component cannot carry a path are rejected up front.
inline bool check_main_component(const DirectedGraph& g, const RunConfig& cfg, std::ostream& err) {
  if (g.node_count() == 0) {
    err << "error: graph is empty; main component has no nodes\n";
    return false;
  }
  const CompactGraph compact(g);
  const auto part = cfg.component == ComponentChoice::weak_main ? weak_partition(compact) : strong_partition(compact);
  if (part.main().members.size() < 2) {
    err << "error: main " << (cfg.component == ComponentChoice::weak_main ? "weak" : "strong")
        << " component has fewer than two nodes\n";
    return false;
  }
  return true;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

}  // namespace detail

/// Downloads (or filters a local dump) into a newline-delimited record file.
inline int cmd_fetch(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                     fetch::FetchOptions options = {}, const EnvLookup& env = process_env) {
  detail::require(cfg.ledger.has_value(), "fetch requires --ledger");
  detail::require(cfg.interval.has_value(), "fetch requires --from and --to");
  detail::require(!cfg.output.empty(), "fetch requires --out");
  fetch::FetchJob job;
  job.ledger = *cfg.ledger;
  job.interval = *cfg.interval;
  job.workers = cfg.workers;
  if (!cfg.input.empty()) {
    job.source = cfg.input;
  } else {
    const auto settings = resolve_settings(job.ledger, cfg.config_file, env);
    job.source = settings.endpoint;
    options.backoff = settings.backoff;
  }
  const auto result = fetch::fetch_transactions(job, std::move(options));

  std::ofstream dump(cfg.output, std::ios::binary);
  for (const auto& r : result.records) write_record(dump, r);
  if (!dump) throw std::runtime_error("cannot write " + cfg.output.string());

  out << "transactions: " << result.records.size() << '\n';
  err << "requests: " << result.requests << ", rate-limited: " << result.rate_limited
      << ", malformed: " << result.malformed << ", ignored: " << result.ignored
      << ", duplicates: " << result.duplicates << '\n';
  if (!result.complete()) {
    err << "fetch incomplete; failed ranges (rerun with these bounds to resume):\n";
    for (const auto& f : result.failures) err << "  " << f.unit.describe() << ": " << f.message << '\n';
    return kFetchFailure;
  }
  return kOk;
}

/// Builds the transaction graph from a dump and writes Pajek plus ingestion stats.
inline int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  detail::require(!cfg.input.empty() && !cfg.output.empty(), "build requires --in and --out");
  std::ifstream in(cfg.input);
  if (!in) {
    err << "error: cannot read " << cfg.input.string() << '\n';
    return kDataFailure;
  }
  GraphBuilder builder;
  std::uint64_t other_ledger = 0;
  const auto summary = read_dump(in, [&](TransactionRecord&& r) {
    if (cfg.ledger && r.ledger != *cfg.ledger) {
      ++other_ledger;
      return;
    }
    builder.add(r);
  });
  builder.count_skipped(summary.skipped);
  for (const auto& issue : summary.issues)
    err << "skipped line " << issue.line << ": " << issue.message << '\n';
  if (summary.non_empty_lines > 0 && summary.records == 0) {
    err << "error: no line of " << cfg.input.string() << " is a valid record\n";
    return kDataFailure;
  }
  if (other_ledger > 0) err << "ignored " << other_ledger << " records of other ledgers\n";

  const auto stats = builder.stats();
  {
    std::ofstream net(cfg.output, std::ios::binary);
    pajek::write(net, builder.graph(), cfg.labels);
  }
  detail::write_file(detail::stats_path_for(cfg, cfg.output), nlohmann::json(stats).dump(2) + "\n");
  out << "transactions: " << stats.transactions << "\nbinary connections: " << stats.binary_connections
      << "\nnodes: " << stats.nodes << "\narcs: " << stats.unique_arcs << "\nself-loops: " << stats.self_loops
      << "\nskipped: " << stats.skipped_records << '\n';
  return kOk;
}

/// Metric suite of one Pajek graph, as JSON plus degree tables.
inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  detail::require(!cfg.input.empty() && !cfg.output.empty(), "analyze requires --in and --out");
  const DirectedGraph g = detail::read_graph(cfg.input);
  if (!detail::check_main_component(g, cfg, err)) return kDataFailure;
  MetricsReport report = analyze(g, detail::analysis_options(cfg));
  if (const auto stats_file = detail::stats_path_for(cfg, cfg.input); fs::exists(stats_file))
    report.edge_reuse_ratio = detail::read_json(stats_file).get<IngestionStats>().edge_reuse_ratio;
  detail::log_phases(err, "analyze", report.phase_seconds);

  detail::write_file(cfg.output, to_json(report, cfg.timings).dump(2) + "\n");
  fs::path prefix = cfg.plot_prefix;
  if (prefix.empty()) prefix = fs::path(cfg.output).replace_extension();
  const std::pair<const char*, const std::map<std::size_t, std::size_t>*> tables[] = {
      {".in_degree.txt", &report.degree_histogram.in_degree},
      {".out_degree.txt", &report.degree_histogram.out_degree},
      {".total_degree.txt", &report.degree_histogram.total_degree}};
  for (auto [suffix, table] : tables) {
    std::ostringstream text;
    write_degree_table(text, *table);
    detail::write_file(prefix.string() + suffix, text.str());
  }
  out << "graph ACC: " << report.graph_acc << "\nmain component ACC: " << report.main_component_acc
      << "\nmain component ASPL: ";
  if (report.main_component_aspl.aspl)
    out << *report.main_component_aspl.aspl;
  else
    out << "undefined";
  out << '\n';
  return kOk;
}

/// Real graph versus its size-matched Erdős–Rényi graph.
inline int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  detail::require(!cfg.input.empty() && !cfg.output.empty(), "compare requires --in and --out");
  const DirectedGraph g = detail::read_graph(cfg.input);
  if (!detail::check_main_component(g, cfg, err)) return kDataFailure;
  SmallWorldReport report = small_world_compare(g, detail::analysis_options(cfg), cfg.seed);
  if (const auto stats_file = detail::stats_path_for(cfg, cfg.input); fs::exists(stats_file))
    report.real.edge_reuse_ratio = detail::read_json(stats_file).get<IngestionStats>().edge_reuse_ratio;
  detail::log_phases(err, "compare", report.phase_seconds);
  detail::write_file(cfg.output, to_json(report, cfg.timings).dump(2) + "\n");
  out << "sigma: ";
  if (report.ratios.sigma)
    out << *report.ratios.sigma;
  else
    out << "undefined";
  out << '\n';
  for (const auto& why : report.ratios.undefined) err << "undefined ratio: " << why << '\n';
  return kOk;
}

namespace detail {

inline std::string num(const nlohmann::json& v, int precision = 6) {
  if (v.is_null()) return "n/a";
  std::ostringstream s;
  s << std::setprecision(precision) << v.get<double>();
  return s.str();
}

inline void metrics_row(std::ostream& out, const std::string& name, const nlohmann::json& m) {
  out << std::left << std::setw(10) << name << std::setw(14) << num(m.at("graph_acc")) << std::setw(20)
      << num(m.at("main_component_aspl")) << num(m.at("main_component_acc")) << '\n';
}

}  // namespace detail

/// Human-readable summary of an analyze or compare JSON document.
inline int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  detail::require(!cfg.input.empty(), "report requires --in");
  const auto doc = detail::read_json(cfg.input);
  std::ostringstream text;
  const bool comparison = doc.contains("real");
  const auto& real = comparison ? doc.at("real") : doc;

  text << std::left << std::setw(10) << "graph" << std::setw(14) << "graph ACC" << std::setw(20)
       << "main comp. ASPL" << "main comp. ACC\n";
  detail::metrics_row(text, "real", real);
  if (comparison) detail::metrics_row(text, "random", doc.at("random"));

  const auto nodes = real.at("nodes").get<double>();
  const auto& cs = real.at("component_sizes");
  text << "\nnodes: " << real.at("nodes") << "  arcs: " << real.at("arcs")
       << "  |E|/|N|: " << detail::num(nodes > 0 ? real.at("arcs").get<double>() / nodes : 0.0, 3)
       << "\nweak main component: " << cs.at("weak_main") << " ("
       << detail::num(cs.at("weak_main_fraction").get<double>() * 100, 4) << "%)"
       << "  strong main component: " << cs.at("strong_main") << " ("
       << detail::num(cs.at("strong_main_fraction").get<double>() * 100, 4) << "%)"
       << "\nedge reuse: " << detail::num(real.at("edge_reuse_ratio").get<double>() * 100, 4) << "%\n";
  if (comparison) {
    text << "\nACC ratio: " << detail::num(doc.at("acc_ratio")) << "  ASPL ratio: " << detail::num(doc.at("aspl_ratio"))
         << "  sigma: " << detail::num(doc.at("sigma")) << '\n';
    for (const auto& why : doc.at("undefined")) text << "undefined: " << why.get<std::string>() << '\n';
  }
  text << "\nhub degree  load centrality\n";
  for (const auto& hub : real.at("hub_load"))
    text << std::left << std::setw(12) << hub.at("degree").get<std::size_t>() << detail::num(hub.at("load"), 4) << '\n';

  if (cfg.output.empty())
    out << text.str();
  else
    detail::write_file(cfg.output, text.str());
  return kOk;
}

/// Dispatches `cfg.command`, mapping failures onto the documented exit codes.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr,
               fetch::FetchOptions fetch_options = {}) {
  try {
    if (cfg.workers < 1) throw ContractError("--workers must be at least 1");
    switch (cfg.command) {
      case Command::fetch: return cmd_fetch(cfg, out, err, std::move(fetch_options));
      case Command::build: return cmd_build(cfg, out, err);
      case Command::analyze: return cmd_analyze(cfg, out, err);
      case Command::compare: return cmd_compare(cfg, out, err);
      case Command::report: return cmd_report(cfg, out, err);
    }
  } catch (const ContractError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kDataFailure;
  } catch (const fetch::RequestFailed& e) {
    err << "fetch error: " << e.what() << '\n';
    return kFetchFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return cfg.command == Command::fetch ? kFetchFailure : kDataFailure;
  }
  return kUsage;
}

}  // namespace ledgergraph::pipeline

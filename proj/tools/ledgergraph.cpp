// ledgergraph: fetch → build → analyze → compare → report over ledger transaction graphs.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ledgergraph/pipeline.hpp"

namespace {

using ledgergraph::pipeline::Command;
using ledgergraph::pipeline::RunConfig;

struct RawArgs {
  std::string ledger;
  std::string from;
  std::string to;
  std::string component = "weak";
  std::string clustering = "undirected";
  std::string input;
  std::string output;
  std::string stats;
  std::string plot_prefix;
  std::string config;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transaction-graph reconstruction and small-world analysis for distributed ledgers"};
  app.require_subcommand(1);
  RunConfig cfg;
  RawArgs raw;

  auto* fetch = app.add_subcommand("fetch", "Retrieve transactions for an interval into a record dump");
  fetch->add_option("--ledger", raw.ledger, "bitcoin | dogecoin | ethereum | ethereum_internal | ripple")->required();
  fetch->add_option("--from", raw.from, "Interval start (UTC, YYYY-MM-DD or ISO-8601)")->required();
  fetch->add_option("--to", raw.to, "Interval end, exclusive")->required();
  fetch->add_option("--workers", cfg.workers, "Concurrent fetchers")->check(CLI::PositiveNumber);
  fetch->add_option("--in", raw.input, "Read a local record dump instead of querying an explorer");
  fetch->add_option("--out", raw.output, "Record dump to write")->required();
  fetch->add_option("--config", raw.config, "JSON file with endpoints, API keys and backoff settings");

  auto* build = app.add_subcommand("build", "Build the transaction graph from a record dump");
  build->add_option("--in", raw.input, "Record dump")->required();
  build->add_option("--out", raw.output, "Pajek file to write")->required();
  build->add_option("--ledger", raw.ledger, "Keep only records of this ledger");
  build->add_option("--stats", raw.stats, "Ingestion stats JSON (default <out>.stats.json)");
  build->add_flag("--labels", cfg.labels, "Write address labels into the Pajek file");

  auto add_analysis_flags = [&](CLI::App* cmd) {
    cmd->add_option("--in", raw.input, "Pajek graph")->required();
    cmd->add_option("--out", raw.output, "Report JSON to write")->required();
    cmd->add_option("--workers", cfg.workers, "Worker threads for shortest paths")->check(CLI::PositiveNumber);
    cmd->add_option("--sample", cfg.sample_fraction, "Fraction of main-component nodes sampled for ASPL")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", cfg.seed, "Seed for node sampling and the random graph");
    cmd->add_option("--component", raw.component, "Main component kind")->check(CLI::IsMember({"weak", "strong"}));
    cmd->add_flag("--undirected", cfg.undirected, "Measure shortest paths on the undirected projection");
    cmd->add_option("--clustering", raw.clustering, "Clustering convention")
        ->check(CLI::IsMember({"undirected", "directed"}));
    cmd->add_option("--hubs", cfg.hubs, "Number of highest-degree hubs to report load centrality for");
    cmd->add_option("--stats", raw.stats, "Ingestion stats JSON (default <in>.stats.json when present)");
    cmd->add_flag("--timings", cfg.timings, "Embed per-phase wall-clock times in the JSON");
  };
  auto* analyze = app.add_subcommand("analyze", "Compute the metric suite of a graph");
  add_analysis_flags(analyze);
  analyze->add_option("--plot-prefix", raw.plot_prefix, "Prefix for degree tables (default: --out without extension)");
  auto* compare = app.add_subcommand("compare", "Compare a graph against a size-matched random graph");
  add_analysis_flags(compare);

  auto* report = app.add_subcommand("report", "Print a summary of an analyze or compare JSON");
  report->add_option("--in", raw.input, "Report JSON")->required();
  report->add_option("--out", raw.output, "Write the summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ledgergraph::pipeline::kUsage;
  }

  const std::map<CLI::App*, Command> commands{{fetch, Command::fetch},
                                               {build, Command::build},
                                               {analyze, Command::analyze},
                                               {compare, Command::compare},
                                               {report, Command::report}};
  cfg.command = commands.at(app.get_subcommands().front());

  if (!raw.ledger.empty()) {
    cfg.ledger = ledgergraph::parse_ledger(raw.ledger);
    if (!cfg.ledger) {
      std::cerr << "usage error: unknown ledger '" << raw.ledger << "'\n";
      return ledgergraph::pipeline::kUsage;
    }
  }
  if (!raw.from.empty()) {
    const auto start = ledgergraph::parse_utc(raw.from);
    const auto end = ledgergraph::parse_utc(raw.to);
    if (!start || !end || *start >= *end) {
      std::cerr << "usage error: --from/--to must be UTC dates with from < to\n";
      return ledgergraph::pipeline::kUsage;
    }
    cfg.interval = ledgergraph::Interval{*start, *end};
  }
  if (cfg.sample_fraction <= 0.0) {
    std::cerr << "usage error: --sample must lie in (0, 1]\n";
    return ledgergraph::pipeline::kUsage;
  }
  cfg.component = raw.component == "strong" ? ledgergraph::ComponentChoice::strong_main
                                            : ledgergraph::ComponentChoice::weak_main;
  cfg.clustering = raw.clustering == "directed" ? ledgergraph::ClusteringMode::directed
                                                : ledgergraph::ClusteringMode::undirected;
  cfg.input = raw.input;
  cfg.output = raw.output;
  cfg.stats = raw.stats;
  cfg.plot_prefix = raw.plot_prefix;
  cfg.config_file = raw.config;

  return ledgergraph::pipeline::run(cfg);
}

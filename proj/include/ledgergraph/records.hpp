#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <ranges>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ledgergraph/error.hpp"
#include "ledgergraph/graph.hpp"

namespace ledgergraph {

enum class Ledger { bitcoin, dogecoin, ethereum, ethereum_internal, ripple };

inline constexpr std::array<std::pair<Ledger, std::string_view>, 5> kLedgerNames{{
    {Ledger::bitcoin, "bitcoin"},
    {Ledger::dogecoin, "dogecoin"},
    {Ledger::ethereum, "ethereum"},
    {Ledger::ethereum_internal, "ethereum_internal"},
    {Ledger::ripple, "ripple"},
}};

inline std::string_view to_string(Ledger ledger) {
  for (auto [l, name] : kLedgerNames)
    if (l == ledger) return name;
  return "unknown";
}

inline std::optional<Ledger> parse_ledger(std::string_view name) {
  for (auto [l, n] : kLedgerNames)
    if (n == name) return l;
  return std::nullopt;
}

// UTXO ledgers allow many inputs and outputs per transaction.
inline bool is_utxo(Ledger ledger) { return ledger == Ledger::bitcoin || ledger == Ledger::dogecoin; }

/// Ledger transaction normalized to sender and recipient address lists.
struct TransactionRecord {
  Ledger ledger = Ledger::bitcoin;
  std::vector<std::string> senders;
  std::vector<std::string> recipients;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  std::string tx_kind;         // ledger-native type tag, e.g. "Payment"
  std::string hash;            // ledger-native id; may be empty

  friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

inline void validate(const TransactionRecord& r) {
  if (r.senders.empty() || r.recipients.empty()) throw ContractError("record needs at least one sender and recipient");
  auto blank = [](const std::string& a) { return a.empty(); };
  if (std::ranges::any_of(r.senders, blank) || std::ranges::any_of(r.recipients, blank))
    throw ContractError("record contains an empty address");
  if (!is_utxo(r.ledger) && (r.senders.size() != 1 || r.recipients.size() != 1))
    throw ContractError(std::string(to_string(r.ledger)) + " records have exactly one sender and one recipient");
}

inline void to_json(nlohmann::json& j, const TransactionRecord& r) {
  j = nlohmann::json{{"ledger", to_string(r.ledger)},
                     {"senders", r.senders},
                     {"recipients", r.recipients},
                     {"timestamp", r.timestamp},
                     {"tx_kind", r.tx_kind}};
  if (!r.hash.empty()) j["hash"] = r.hash;
}

inline void from_json(const nlohmann::json& j, TransactionRecord& r) {
  const auto name = j.at("ledger").get<std::string>();
  const auto ledger = parse_ledger(name);
  if (!ledger) throw ContractError("unknown ledger '" + name + "'");
  r.ledger = *ledger;
  r.senders = j.at("senders").get<std::vector<std::string>>();
  r.recipients = j.at("recipients").get<std::vector<std::string>>();
  r.timestamp = j.at("timestamp").get<std::int64_t>();
  r.tx_kind = j.value("tx_kind", std::string{});
  r.hash = j.value("hash", std::string{});
  validate(r);
}

// Key used to drop repeated records: the native hash when present, else the
// (timestamp, senders, recipients) tuple.
inline std::string dedup_key(const TransactionRecord& r) {
  if (!r.hash.empty()) return std::string(to_string(r.ledger)) + ":" + r.hash;
  std::string key = std::string(to_string(r.ledger)) + "|" + std::to_string(r.timestamp);
  for (const auto& s : r.senders) key += "|s:" + s;
  for (const auto& d : r.recipients) key += "|r:" + d;
  return key;
}

namespace detail {

inline std::vector<std::string_view> distinct(const std::vector<std::string>& addresses) {
  std::vector<std::string_view> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& a : addresses)
    if (seen.insert(a).second) out.emplace_back(a);
  return out;
}

}  // namespace detail

/// Sender→recipient pairs a record contributes to the graph.
///
/// UTXO ledgers expand to the full cross product of the distinct inputs and
/// distinct outputs. Account ledgers give a single pair, except Ripple where
/// only `Payment` transactions move funds between two accounts.
inline std::vector<std::pair<std::string, std::string>> map_to_edges(const TransactionRecord& record) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (record.ledger == Ledger::ripple && record.tx_kind != "Payment") return pairs;
  if (!is_utxo(record.ledger)) {
    pairs.emplace_back(record.senders.front(), record.recipients.front());
    return pairs;
  }
  const auto from = detail::distinct(record.senders);
  const auto to = detail::distinct(record.recipients);
  pairs.reserve(from.size() * to.size());
  for (auto s : from)
    for (auto d : to) pairs.emplace_back(s, d);
  return pairs;
}

struct IngestionStats {
  std::uint64_t transactions = 0;
  std::uint64_t binary_connections = 0;  // mapped pairs before deduplication, self pairs included
  std::uint64_t unique_arcs = 0;
  std::uint64_t self_loops = 0;
  std::uint64_t nodes = 0;
  std::uint64_t skipped_records = 0;
  double edge_reuse_ratio = 0.0;
};

inline void to_json(nlohmann::json& j, const IngestionStats& s) {
  j = nlohmann::json{{"transactions", s.transactions},     {"binary_connections", s.binary_connections},
                     {"unique_arcs", s.unique_arcs},       {"self_loops", s.self_loops},
                     {"nodes", s.nodes},                   {"skipped_records", s.skipped_records},
                     {"edge_reuse_ratio", s.edge_reuse_ratio}};
}

inline void from_json(const nlohmann::json& j, IngestionStats& s) {
  s.transactions = j.at("transactions").get<std::uint64_t>();
  s.binary_connections = j.at("binary_connections").get<std::uint64_t>();
  s.unique_arcs = j.at("unique_arcs").get<std::uint64_t>();
  s.self_loops = j.at("self_loops").get<std::uint64_t>();
  s.nodes = j.at("nodes").get<std::uint64_t>();
  s.skipped_records = j.value("skipped_records", std::uint64_t{0});
  s.edge_reuse_ratio = j.at("edge_reuse_ratio").get<double>();
}

// Incremental graph construction from a record stream.
class GraphBuilder {
 public:
  void add(const TransactionRecord& record) {
    ++transactions_;
    if (record.ledger == Ledger::ripple && record.tx_kind != "Payment") return;
    if (!is_utxo(record.ledger)) {
      link(record.senders.front(), record.recipients.front());
      return;
    }
    const auto to = detail::distinct(record.recipients);
    std::vector<NodeId> to_ids;
    for (auto s : detail::distinct(record.senders)) {
      const NodeId src = graph_.intern_address(s);
      if (to_ids.empty())
        for (auto d : to) to_ids.push_back(graph_.intern_address(d));
      for (NodeId dst : to_ids) {
        ++binary_connections_;
        graph_.add_arc(src, dst);
      }
    }
  }

  void count_skipped(std::uint64_t n = 1) { skipped_ += n; }

  IngestionStats stats() const {
    IngestionStats s;
    s.transactions = transactions_;
    s.binary_connections = binary_connections_;
    s.unique_arcs = graph_.arc_count();
    s.self_loops = graph_.self_loop_count();
    s.nodes = graph_.node_count();
    s.skipped_records = skipped_;
    s.edge_reuse_ratio = graph_.edge_reuse_ratio();
    return s;
  }

  const DirectedGraph& graph() const& { return graph_; }
  DirectedGraph release() && { return std::move(graph_); }

 private:
  void link(std::string_view from, std::string_view to) {
    const NodeId a = graph_.intern_address(from);
    const NodeId b = graph_.intern_address(to);
    ++binary_connections_;
    graph_.add_arc(a, b);
  }

  DirectedGraph graph_;
  std::uint64_t transactions_ = 0;
  std::uint64_t binary_connections_ = 0;
  std::uint64_t skipped_ = 0;
};

struct BuildResult {
  DirectedGraph graph;
  IngestionStats stats;
};

template <std::ranges::input_range Records>
  requires std::convertible_to<std::ranges::range_reference_t<Records>, const TransactionRecord&>
BuildResult build_graph(Records&& records) {
  GraphBuilder builder;
  for (const TransactionRecord& r : records) builder.add(r);
  auto stats = builder.stats();
  return {std::move(builder).release(), stats};
}

// ---- newline-delimited dump files ----

struct DumpIssue {
  std::size_t line = 0;
  std::string message;
};

struct DumpReadSummary {
  std::uint64_t records = 0;
  std::uint64_t skipped = 0;
  std::uint64_t non_empty_lines = 0;
  std::vector<DumpIssue> issues;  // first few skipped lines
};

// Calls `sink(record)` for every valid line; invalid lines are skipped and reported.
template <typename Sink>
DumpReadSummary read_dump(std::istream& in, Sink&& sink, std::size_t max_issues = 20) {
  DumpReadSummary summary;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++summary.non_empty_lines;
    TransactionRecord record;
    try {
      record = nlohmann::json::parse(line).get<TransactionRecord>();
    } catch (const std::exception& e) {
      ++summary.skipped;
      if (summary.issues.size() < max_issues) summary.issues.push_back({number, e.what()});
      continue;
    }
    ++summary.records;
    sink(std::move(record));
  }
  return summary;
}

inline void write_record(std::ostream& out, const TransactionRecord& record) {
  out << nlohmann::json(record).dump() << '\n';
}

}  // namespace ledgergraph

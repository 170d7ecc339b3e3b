#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ledgergraph/error.hpp"
#include "ledgergraph/parallel.hpp"
#include "ledgergraph/records.hpp"
#include "ledgergraph/timeutil.hpp"

namespace ledgergraph::fetch {

using std::chrono::milliseconds;

// ---------------------------------------------------------------------------
// transport

struct HttpResponse {
  int status = 0;  // 0 when no response arrived
  std::string body;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // `target` is path plus query, relative to the endpoint base URL.
  virtual HttpResponse get(const std::string& target) = 0;
};

using TransportFactory = std::function<std::unique_ptr<HttpTransport>()>;

struct Endpoint {
  std::string base_url;
  std::string api_key;
  std::string key_header;  // send the key as this header instead of a query parameter
};

// cpp-httplib backed transport; not shareable across threads.
class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(const Endpoint& endpoint) {
    const auto scheme_end = endpoint.base_url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = endpoint.base_url.find('/', host_start);
    const std::string origin = endpoint.base_url.substr(0, path_start);
    if (path_start != std::string::npos) prefix_ = endpoint.base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    client_ = std::make_unique<httplib::Client>(origin);
    client_->set_connection_timeout(10, 0);
    client_->set_read_timeout(60, 0);
    client_->set_follow_location(true);
    if (!endpoint.key_header.empty() && !endpoint.api_key.empty())
      client_->set_default_headers({{endpoint.key_header, endpoint.api_key}});
  }

  HttpResponse get(const std::string& target) override {
    auto res = client_->Get(prefix_ + target);
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
  }

 private:
  std::unique_ptr<httplib::Client> client_;
  std::string prefix_;
};

// ---------------------------------------------------------------------------
// rate limiting

/// Pause schedule for HTTP 429 (and transient failures): `initial`, doubling
/// per consecutive failure of the same request, capped at `cap`; the request
/// is abandoned after `max_retries` retries.
struct BackoffPolicy {
  milliseconds initial{5000};
  milliseconds cap{60000};
  int max_retries = 8;

  // Pause before retry number `attempt` (1-based).
  milliseconds delay(int attempt) const {
    milliseconds d = initial;
    for (int i = 1; i < attempt && d < cap; ++i) d *= 2;
    return std::min(d, cap);
  }
};

using Sleeper = std::function<void(milliseconds)>;

inline Sleeper real_sleeper() {
  return [](milliseconds d) { std::this_thread::sleep_for(d); };
}

class RequestFailed : public std::runtime_error {
 public:
  RequestFailed(const std::string& what, int status) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// Issues requests for one worker and applies the backoff policy.
class Requester {
 public:
  Requester(HttpTransport& transport, BackoffPolicy policy, Sleeper sleeper)
      : transport_(transport), policy_(policy), sleeper_(std::move(sleeper)) {}

  std::string get(const std::string& target) {
    for (int attempt = 0;; ++attempt) {
      ++requests_;
      HttpResponse res = transport_.get(target);
      if (res.status >= 200 && res.status < 300) return std::move(res.body);
      const bool retryable = res.status == 429 || res.status == 0 || res.status >= 500;
      if (res.status == 429) ++rate_limited_;
      if (!retryable || attempt >= policy_.max_retries) {
        const std::string reason = res.status == 0 ? res.error : "HTTP " + std::to_string(res.status);
        throw RequestFailed("GET " + target + " failed: " + reason + " after " + std::to_string(attempt + 1) +
                                " attempt(s)",
                            res.status);
      }
      const milliseconds pause = policy_.delay(attempt + 1);
      pauses_.push_back(pause);
      sleeper_(pause);
    }
  }

  nlohmann::json get_json(const std::string& target) {
    const std::string body = get(target);
    try {
      return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw RequestFailed("GET " + target + " returned invalid JSON: " + e.what(), 200);
    }
  }

  std::uint64_t requests() const noexcept { return requests_; }
  std::uint64_t rate_limited() const noexcept { return rate_limited_; }
  const std::vector<milliseconds>& pauses() const noexcept { return pauses_; }

 private:
  HttpTransport& transport_;
  BackoffPolicy policy_;
  Sleeper sleeper_;
  std::uint64_t requests_ = 0;
  std::uint64_t rate_limited_ = 0;
  std::vector<milliseconds> pauses_;
};

// ---------------------------------------------------------------------------
// work partitioning

struct WorkUnit {
  enum class Kind { time_slice, block_range } kind = Kind::time_slice;
  std::int64_t first = 0;  // inclusive
  std::int64_t last = 0;   // exclusive

  std::string describe() const {
    if (kind == Kind::time_slice) return "[" + format_utc(first) + ", " + format_utc(last) + ")";
    return "blocks [" + std::to_string(first) + ", " + std::to_string(last) + ")";
  }
  friend bool operator==(const WorkUnit&, const WorkUnit&) = default;
};

inline std::vector<WorkUnit> time_slices(const Interval& interval, std::int64_t slice_seconds) {
  std::vector<WorkUnit> units;
  for (std::int64_t t = interval.start; t < interval.end; t += slice_seconds)
    units.push_back({WorkUnit::Kind::time_slice, t, std::min(interval.end, t + slice_seconds)});
  return units;
}

inline std::vector<WorkUnit> block_chunks(std::int64_t first, std::int64_t last, std::int64_t chunk) {
  std::vector<WorkUnit> units;
  for (std::int64_t b = first; b < last; b += chunk)
    units.push_back({WorkUnit::Kind::block_range, b, std::min(last, b + chunk)});
  return units;
}

// Smallest height h in [lo, hi) with block_time(h) >= t, or hi if none.
// Block times are treated as non-decreasing in height.
template <typename BlockTime>
std::int64_t first_block_at_or_after(std::int64_t lo, std::int64_t hi, std::int64_t t, BlockTime&& block_time) {
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (block_time(mid) < t)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Ripple pagination

/// One page request against the Ripple transactions endpoint.
struct RippleRequest {
  Interval interval;
  std::size_t limit = 100;
  std::size_t offset = 0;  // records already consumed; used when the server sends no marker
  std::string marker;

  std::string target() const {
    std::string t = "/v2/transactions?start=" + format_utc(interval.start) + "&end=" + format_utc(interval.end) +
                    "&type=Payment&result=tesSUCCESS&descending=false&limit=" + std::to_string(limit);
    if (!marker.empty())
      t += "&marker=" + httplib::detail::encode_query_param(marker);
    else if (offset > 0)
      t += "&offset=" + std::to_string(offset);
    return t;
  }
};

// The endpoint returns at most 100 records per request, so an interval is
// walked page by page until a short page shows it is exhausted.
class RipplePager {
 public:
  explicit RipplePager(Interval interval, std::size_t page_size = 100) : next_{interval, page_size, 0, {}} {
    if (page_size == 0 || page_size > 100) throw ContractError("ripple page size must be in [1, 100]");
  }

  std::optional<RippleRequest> next() const {
    if (done_) return std::nullopt;
    return next_;
  }

  void advance(std::size_t records_in_page, std::string marker = {}) {
    if (done_) return;
    if (records_in_page < next_.limit) {
      done_ = true;
      return;
    }
    next_.offset += records_in_page;
    next_.marker = std::move(marker);
  }

 private:
  RippleRequest next_;
  bool done_ = false;
};

// Drives a pager with `page(request) -> (record count, marker)` and returns
// every request issued.
template <typename PageFn>
std::vector<RippleRequest> paginate_ripple(const Interval& interval, std::size_t page_size, PageFn&& page) {
  std::vector<RippleRequest> issued;
  RipplePager pager(interval, page_size);
  while (auto request = pager.next()) {
    issued.push_back(*request);
    auto [count, marker] = page(*request);
    pager.advance(count, std::move(marker));
  }
  return issued;
}

// ---------------------------------------------------------------------------
// ledger adapters

struct UnitOutput {
  std::vector<TransactionRecord> records;
  std::uint64_t malformed = 0;
  std::uint64_t ignored = 0;  // well-formed but not a sender→recipient transfer
};

class LedgerSource {
 public:
  virtual ~LedgerSource() = default;
  virtual std::vector<WorkUnit> plan(Requester& requester, const Interval& interval) = 0;
  virtual UnitOutput fetch_unit(Requester& requester, const WorkUnit& unit, const Interval& interval) = 0;
};

namespace detail {

inline std::string string_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

inline std::int64_t parse_hex(const std::string& s) {
  if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) throw std::invalid_argument("bad hex: " + s);
  return static_cast<std::int64_t>(std::stoull(s.substr(2), nullptr, 16));
}

inline std::string to_hex(std::int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::int64_t as_int(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return std::stoll(j.get<std::string>());
  throw std::invalid_argument("expected integer");
}

}  // namespace detail

// Ripple Data API v2 style `/v2/transactions`.
class RippleSource final : public LedgerSource {
 public:
  explicit RippleSource(std::int64_t slice_seconds = 3600, std::size_t page_size = 100)
      : slice_seconds_(slice_seconds), page_size_(page_size) {}

  std::vector<WorkUnit> plan(Requester&, const Interval& interval) override {
    return time_slices(interval, slice_seconds_);
  }

  UnitOutput fetch_unit(Requester& requester, const WorkUnit& unit, const Interval& interval) override {
    UnitOutput out;
    paginate_ripple(Interval{unit.first, unit.last}, page_size_, [&](const RippleRequest& req) {
      const auto page = requester.get_json(req.target());
      const auto& txs = page.at("transactions");
      for (const auto& entry : txs) parse_entry(entry, interval, out);
      return std::pair{txs.size(), detail::string_field(page, "marker")};
    });
    return out;
  }

  static void parse_entry(const nlohmann::json& entry, const Interval& interval, UnitOutput& out) {
    try {
      const auto& tx = entry.at("tx");
      TransactionRecord r;
      r.ledger = Ledger::ripple;
      r.hash = detail::string_field(entry, "hash");
      r.tx_kind = detail::string_field(tx, "TransactionType");
      const auto when = parse_utc(entry.at("date").get<std::string>());
      if (!when) throw std::invalid_argument("bad date");
      r.timestamp = *when;
      const auto account = detail::string_field(tx, "Account");
      const auto destination = detail::string_field(tx, "Destination");
      if (account.empty()) throw std::invalid_argument("missing Account");
      if (destination.empty()) {
        ++out.ignored;
        return;
      }
      r.senders = {account};
      r.recipients = {destination};
      if (interval.contains(r.timestamp)) out.records.push_back(std::move(r));
    } catch (const std::exception&) {
      ++out.malformed;
    }
  }

 private:
  std::int64_t slice_seconds_;
  std::size_t page_size_;
};

// Block-oriented explorers: find the block range covering the interval by
// binary search over block timestamps, then fetch block contents.
class BlockSource : public LedgerSource {
 public:
  explicit BlockSource(std::int64_t chunk) : chunk_(chunk) {}

  std::vector<WorkUnit> plan(Requester& requester, const Interval& interval) override {
    const std::int64_t tip = chain_tip(requester);
    auto time_of = [&](std::int64_t h) { return block_time(requester, h); };
    const std::int64_t first = first_block_at_or_after(0, tip + 1, interval.start, time_of);
    const std::int64_t last = first_block_at_or_after(first, tip + 1, interval.end, time_of);
    return block_chunks(first, last, chunk_);
  }

 protected:
  virtual std::int64_t chain_tip(Requester& requester) = 0;
  virtual std::int64_t block_time(Requester& requester, std::int64_t height) = 0;

 private:
  std::int64_t chunk_;
};

// Etherscan proxy module: top-level transactions of each block.
class EtherscanSource : public BlockSource {
 public:
  explicit EtherscanSource(std::string api_key = {}, std::int64_t chunk = 25)
      : BlockSource(chunk), key_(std::move(api_key)) {}

  UnitOutput fetch_unit(Requester& requester, const WorkUnit& unit, const Interval& interval) override {
    UnitOutput out;
    for (std::int64_t h = unit.first; h < unit.last; ++h) {
      const auto block = block_by_number(requester, h, true);
      std::int64_t ts = 0;
      try {
        ts = detail::parse_hex(block.at("timestamp").get<std::string>());
      } catch (const std::exception&) {
        throw RequestFailed("block " + std::to_string(h) + " has no timestamp", 200);
      }
      for (const auto& tx : block.value("transactions", nlohmann::json::array())) {
        try {
          TransactionRecord r;
          r.ledger = Ledger::ethereum;
          r.timestamp = ts;
          r.hash = tx.at("hash").get<std::string>();
          r.tx_kind = "transaction";
          const auto from = detail::string_field(tx, "from");
          const auto to = detail::string_field(tx, "to");
          if (from.empty()) throw std::invalid_argument("missing from");
          if (to.empty()) {  // contract creation
            ++out.ignored;
            continue;
          }
          r.senders = {from};
          r.recipients = {to};
          if (interval.contains(r.timestamp)) out.records.push_back(std::move(r));
        } catch (const std::exception&) {
          ++out.malformed;
        }
      }
    }
    return out;
  }

 protected:
  std::string query(const std::string& params) const {
    std::string t = "/api?" + params;
    if (!key_.empty()) t += "&apikey=" + key_;
    return t;
  }

  std::int64_t chain_tip(Requester& requester) override {
    const auto res = requester.get_json(query("module=proxy&action=eth_blockNumber"));
    return detail::parse_hex(res.at("result").get<std::string>());
  }

  std::int64_t block_time(Requester& requester, std::int64_t height) override {
    return detail::parse_hex(block_by_number(requester, height, false).at("timestamp").get<std::string>());
  }

  nlohmann::json block_by_number(Requester& requester, std::int64_t height, bool full) {
    const auto res = requester.get_json(query("module=proxy&action=eth_getBlockByNumber&tag=" + detail::to_hex(height) +
                                              "&boolean=" + (full ? "true" : "false")));
    auto it = res.find("result");
    if (it == res.end() || !it->is_object()) throw RequestFailed("block " + std::to_string(height) + " unavailable", 200);
    return *it;
  }

 private:
  std::string key_;
};

// Etherscan `txlistinternal` over block ranges, paged.
class EtherscanInternalSource final : public EtherscanSource {
 public:
  explicit EtherscanInternalSource(std::string api_key = {}, std::int64_t chunk = 500, std::size_t page_size = 1000)
      : EtherscanSource(std::move(api_key), chunk), page_size_(page_size) {}

  UnitOutput fetch_unit(Requester& requester, const WorkUnit& unit, const Interval& interval) override {
    UnitOutput out;
    for (std::size_t page = 1;; ++page) {
      const auto res = requester.get_json(query(
          "module=account&action=txlistinternal&startblock=" + std::to_string(unit.first) +
          "&endblock=" + std::to_string(unit.last - 1) + "&page=" + std::to_string(page) +
          "&offset=" + std::to_string(page_size_) + "&sort=asc"));
      const auto& result = res.at("result");
      if (!result.is_array()) {
        if (detail::string_field(res, "message").starts_with("No transactions")) break;
        throw RequestFailed("txlistinternal: " + detail::string_field(res, "message"), 200);
      }
      for (const auto& tx : result) {
        try {
          TransactionRecord r;
          r.ledger = Ledger::ethereum_internal;
          r.timestamp = detail::as_int(tx.at("timeStamp"));
          r.tx_kind = detail::string_field(tx, "type");
          const auto trace = detail::string_field(tx, "traceId");
          if (!trace.empty()) r.hash = detail::string_field(tx, "hash") + ":" + trace;
          const auto from = detail::string_field(tx, "from");
          const auto to = detail::string_field(tx, "to");
          if (from.empty()) throw std::invalid_argument("missing from");
          if (to.empty()) {
            ++out.ignored;
            continue;
          }
          r.senders = {from};
          r.recipients = {to};
          if (interval.contains(r.timestamp)) out.records.push_back(std::move(r));
        } catch (const std::exception&) {
          ++out.malformed;
        }
      }
      if (result.size() < page_size_) break;
    }
    return out;
  }

 private:
  std::size_t page_size_;
};

// Blockchain.info: `/latestblock` and `/block-height/{h}?format=json`.
class BlockchainInfoSource final : public BlockSource {
 public:
  BlockchainInfoSource() : BlockSource(1) {}

  UnitOutput fetch_unit(Requester& requester, const WorkUnit& unit, const Interval& interval) override {
    UnitOutput out;
    for (std::int64_t h = unit.first; h < unit.last; ++h) {
      const auto block = main_block(requester, h);
      const std::int64_t ts = detail::as_int(block.at("time"));
      for (const auto& tx : block.value("tx", nlohmann::json::array())) {
        try {
          TransactionRecord r;
          r.ledger = Ledger::bitcoin;
          r.timestamp = ts;
          r.hash = tx.at("hash").get<std::string>();
          r.tx_kind = "transaction";
          for (const auto& in : tx.value("inputs", nlohmann::json::array())) {
            auto prev = in.find("prev_out");
            if (prev != in.end() && prev->is_object()) {
              auto addr = detail::string_field(*prev, "addr");
              if (!addr.empty()) r.senders.push_back(std::move(addr));
            }
          }
          for (const auto& o : tx.value("out", nlohmann::json::array())) {
            auto addr = detail::string_field(o, "addr");
            if (!addr.empty()) r.recipients.push_back(std::move(addr));
          }
          if (r.senders.empty() || r.recipients.empty()) {  // coinbase or non-standard scripts
            ++out.ignored;
            continue;
          }
          if (interval.contains(r.timestamp)) out.records.push_back(std::move(r));
        } catch (const std::exception&) {
          ++out.malformed;
        }
      }
    }
    return out;
  }

 protected:
  std::int64_t chain_tip(Requester& requester) override {
    return detail::as_int(requester.get_json("/latestblock").at("height"));
  }

  std::int64_t block_time(Requester& requester, std::int64_t height) override {
    return detail::as_int(main_block(requester, height).at("time"));
  }

 private:
  static nlohmann::json main_block(Requester& requester, std::int64_t height) {
    const auto res = requester.get_json("/block-height/" + std::to_string(height) + "?format=json");
    const auto& blocks = res.at("blocks");
    for (const auto& b : blocks)
      if (b.value("main_chain", true)) return b;
    throw RequestFailed("no main-chain block at height " + std::to_string(height), 200);
  }
};

// SoChain v2 style: `/api/v2/get_info/DOGE`, `/get_block/DOGE/{h}`, `/get_tx/DOGE/{txid}`.
class SoChainSource final : public BlockSource {
 public:
  explicit SoChainSource(std::string network = "DOGE", std::int64_t chunk = 10)
      : BlockSource(chunk), network_(std::move(network)) {}

  UnitOutput fetch_unit(Requester& requester, const WorkUnit& unit, const Interval& interval) override {
    UnitOutput out;
    for (std::int64_t h = unit.first; h < unit.last; ++h) {
      const auto block = data(requester, "/api/v2/get_block/" + network_ + "/" + std::to_string(h));
      const std::int64_t ts = detail::as_int(block.at("time"));
      if (!interval.contains(ts)) continue;
      for (const auto& entry : block.value("txs", nlohmann::json::array())) {
        const std::string txid = entry.is_string() ? entry.get<std::string>() : detail::string_field(entry, "txid");
        if (txid.empty()) {
          ++out.malformed;
          continue;
        }
        const auto tx = data(requester, "/api/v2/get_tx/" + network_ + "/" + txid);
        try {
          TransactionRecord r;
          r.ledger = Ledger::dogecoin;
          r.timestamp = ts;
          r.hash = txid;
          r.tx_kind = "transaction";
          for (const auto& in : tx.value("inputs", nlohmann::json::array())) {
            auto addr = detail::string_field(in, "address");
            if (!addr.empty() && addr != "coinbase") r.senders.push_back(std::move(addr));
          }
          for (const auto& o : tx.value("outputs", nlohmann::json::array())) {
            auto addr = detail::string_field(o, "address");
            if (!addr.empty() && addr != "nonstandard") r.recipients.push_back(std::move(addr));
          }
          if (r.senders.empty() || r.recipients.empty()) {
            ++out.ignored;
            continue;
          }
          out.records.push_back(std::move(r));
        } catch (const std::exception&) {
          ++out.malformed;
        }
      }
    }
    return out;
  }

 protected:
  std::int64_t chain_tip(Requester& requester) override {
    return detail::as_int(data(requester, "/api/v2/get_info/" + network_).at("blocks"));
  }

  std::int64_t block_time(Requester& requester, std::int64_t height) override {
    return detail::as_int(data(requester, "/api/v2/get_block/" + network_ + "/" + std::to_string(height)).at("time"));
  }

 private:
  static nlohmann::json data(Requester& requester, const std::string& target) {
    auto res = requester.get_json(target);
    if (detail::string_field(res, "status") == "fail") throw RequestFailed(target + ": status fail", 200);
    return res.at("data");
  }

  std::string network_;
};

inline std::string default_base_url(Ledger ledger) {
  switch (ledger) {
    case Ledger::ripple: return "https://data.ripple.com";
    case Ledger::ethereum:
    case Ledger::ethereum_internal: return "https://api.etherscan.io";
    case Ledger::bitcoin: return "https://blockchain.info";
    case Ledger::dogecoin: return "https://sochain.com";
  }
  return {};
}

inline std::unique_ptr<LedgerSource> make_source(Ledger ledger, const Endpoint& endpoint) {
  switch (ledger) {
    case Ledger::ripple: return std::make_unique<RippleSource>();
    case Ledger::ethereum: return std::make_unique<EtherscanSource>(endpoint.key_header.empty() ? endpoint.api_key : "");
    case Ledger::ethereum_internal:
      return std::make_unique<EtherscanInternalSource>(endpoint.key_header.empty() ? endpoint.api_key : "");
    case Ledger::bitcoin: return std::make_unique<BlockchainInfoSource>();
    case Ledger::dogecoin: return std::make_unique<SoChainSource>();
  }
  throw ContractError("no source for ledger");
}

// ---------------------------------------------------------------------------
// fetch driver

struct FetchJob {
  Ledger ledger = Ledger::ripple;
  Interval interval;
  unsigned workers = 1;
  std::variant<Endpoint, std::filesystem::path> source;
};

struct FetchOptions {
  BackoffPolicy backoff;
  Sleeper sleeper = real_sleeper();
  TransportFactory transport;               // defaults to HttplibTransport on the job endpoint
  std::shared_ptr<LedgerSource> adapter;    // defaults to make_source(job.ledger)
};

struct FetchFailure {
  WorkUnit unit;
  std::string message;
};

struct FetchResult {
  std::vector<TransactionRecord> records;
  std::uint64_t malformed = 0;
  std::uint64_t ignored = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t requests = 0;
  std::uint64_t rate_limited = 0;
  std::vector<milliseconds> pauses;
  std::vector<FetchFailure> failures;

  bool complete() const noexcept { return failures.empty(); }
};

namespace detail {

inline void validate(const FetchJob& job) {
  if (job.interval.start >= job.interval.end) throw ContractError("fetch interval must satisfy start < end");
  if (job.workers < 1) throw ContractError("fetch needs at least one worker");
}

inline void append_unique(FetchResult& result, std::vector<TransactionRecord>&& batch,
                          std::unordered_set<std::string>& seen) {
  for (auto& r : batch) {
    if (seen.insert(dedup_key(r)).second)
      result.records.push_back(std::move(r));
    else
      ++result.duplicates;
  }
}

inline FetchResult fetch_local(const FetchJob& job, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dump file " + path.string());
  FetchResult result;
  std::unordered_set<std::string> seen;
  std::vector<TransactionRecord> batch;
  const auto summary = read_dump(in, [&](TransactionRecord&& r) {
    if (r.ledger == job.ledger && job.interval.contains(r.timestamp)) batch.push_back(std::move(r));
  });
  result.malformed = summary.skipped;
  append_unique(result, std::move(batch), seen);
  return result;
}

}  // namespace detail

/// Retrieves every transaction of `job.ledger` with timestamp in the job
/// interval. Remote work is split into units processed by `job.workers`
/// concurrent fetchers; results are concatenated in unit order, so the
/// output does not depend on the worker count. Units that still fail after
/// the backoff policy gives up are listed in `failures`.
inline FetchResult fetch_transactions(const FetchJob& job, FetchOptions options = {}) {
  detail::validate(job);
  if (const auto* path = std::get_if<std::filesystem::path>(&job.source)) return detail::fetch_local(job, *path);

  const Endpoint& endpoint = std::get<Endpoint>(job.source);
  if (!options.transport)
    options.transport = [endpoint] { return std::make_unique<HttplibTransport>(endpoint); };
  auto adapter = options.adapter ? options.adapter : std::shared_ptr<LedgerSource>(make_source(job.ledger, endpoint));

  std::vector<std::unique_ptr<HttpTransport>> transports;
  std::vector<Requester> requesters;
  transports.reserve(job.workers);
  requesters.reserve(job.workers);
  for (unsigned w = 0; w < job.workers; ++w) {
    transports.push_back(options.transport());
    requesters.emplace_back(*transports.back(), options.backoff, options.sleeper);
  }

  FetchResult result;
  auto collect_counters = [&] {
    for (const auto& r : requesters) {
      result.requests += r.requests();
      result.rate_limited += r.rate_limited();
      result.pauses.insert(result.pauses.end(), r.pauses().begin(), r.pauses().end());
    }
  };

  std::vector<WorkUnit> units;
  try {
    units = adapter->plan(requesters.front(), job.interval);
  } catch (const std::exception& e) {
    result.failures.push_back({{WorkUnit::Kind::time_slice, job.interval.start, job.interval.end},
                               std::string("planning failed: ") + e.what()});
    collect_counters();
    return result;
  }

  std::vector<UnitOutput> outputs(units.size());
  std::vector<std::optional<std::string>> errors(units.size());
  parallel_for(units.size(), job.workers, [&](std::size_t i, unsigned worker) {
    try {
      outputs[i] = adapter->fetch_unit(requesters[worker], units[i], job.interval);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (errors[i]) {
      result.failures.push_back({units[i], *errors[i]});
      continue;
    }
    result.malformed += outputs[i].malformed;
    result.ignored += outputs[i].ignored;
    detail::append_unique(result, std::move(outputs[i].records), seen);
  }
  collect_counters();
  return result;
}

}  // namespace ledgergraph::fetch

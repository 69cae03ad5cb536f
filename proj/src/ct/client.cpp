#include "amass/ct/client.hpp"

#include <httplib.h>
#include <json.hpp>

#include <random>
#include <thread>

namespace amass::ct {

using json = nlohmann::json;

namespace {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

std::optional<SplitUrl> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return std::nullopt;
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") return std::nullopt;
  auto host_begin = scheme_end + 3;
  auto path_begin = url.find('/', host_begin);
  SplitUrl out;
  out.scheme_host_port = url.substr(0, path_begin);
  if (out.scheme_host_port.size() == host_begin) return std::nullopt;
  if (path_begin != std::string::npos) out.path_prefix = url.substr(path_begin);
  while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  return out;
}

bool retryable(int status) { return status == 429 || (status >= 500 && status <= 599); }

}  // namespace

void CtLogDescriptor::validate() const {
  if (name.empty()) throw CtError(CtErrc::InvalidLog, "log name is empty");
  if (!split_url(base_url)) {
    throw CtError(CtErrc::InvalidLog, "log '" + name + "': base_url is not an absolute http(s) URL");
  }
  if (shard_window && !(shard_window->first < shard_window->second)) {
    throw CtError(CtErrc::InvalidLog, "log '" + name + "': shard window start must precede end");
  }
}

struct CtLogClient::Http {
  httplib::Client client;
  std::string prefix;
  std::mt19937_64 rng{std::random_device{}()};
  Http(const std::string& shp, std::string p) : client(shp), prefix(std::move(p)) {}
};

CtLogClient::CtLogClient(CtLogDescriptor log, RetryPolicy retry)
    : log_(std::move(log)), retry_(retry) {
  log_.validate();
  auto parts = *split_url(log_.base_url);
  http_ = std::make_unique<Http>(parts.scheme_host_port, parts.path_prefix);
  http_->client.set_connection_timeout(retry_.timeout);
  http_->client.set_read_timeout(retry_.timeout);
  http_->client.set_keep_alive(true);
}

CtLogClient::~CtLogClient() = default;
CtLogClient::CtLogClient(CtLogClient&&) noexcept = default;
CtLogClient& CtLogClient::operator=(CtLogClient&&) noexcept = default;

std::string CtLogClient::get(const std::string& path) {
  const std::string target = http_->prefix + path;
  auto wait = retry_.initial_backoff;
  int last_status = 0;
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    ++requests_;
    auto res = http_->client.Get(target);
    if (res) {
      if (res->status >= 200 && res->status < 300) return std::move(res->body);
      last_status = res->status;
      last_error = "HTTP " + std::to_string(res->status);
      if (!retryable(res->status)) break;
    } else {
      last_status = 0;
      last_error = httplib::to_string(res.error());
    }
    if (attempt == retry_.max_attempts) break;
    std::uniform_real_distribution<double> jitter(0.0, retry_.jitter);
    auto pause = std::chrono::duration_cast<std::chrono::milliseconds>(wait * (1.0 + jitter(http_->rng)));
    std::this_thread::sleep_for(pause);
    wait *= 2;
  }
  throw CtError(CtErrc::HttpError, "log '" + log_.name + "' GET " + target + ": " + last_error, last_status);
}

SignedTreeHead CtLogClient::fetch_sth() {
  auto body = get("/ct/v1/get-sth");
  SignedTreeHead sth;
  try {
    auto j = json::parse(body);
    sth.tree_size = j.at("tree_size").get<std::uint64_t>();
    sth.timestamp_ms = j.at("timestamp").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw CtError(CtErrc::MalformedResponse, "log '" + log_.name + "' get-sth: " + e.what());
  }
  if (last_sth_ && sth.tree_size < last_sth_->tree_size) {
    throw CtError(CtErrc::TreeShrank, "log '" + log_.name + "' tree size went from " +
                                          std::to_string(last_sth_->tree_size) + " to " +
                                          std::to_string(sth.tree_size));
  }
  last_sth_ = sth;
  return sth;
}

std::vector<RawEntry> CtLogClient::fetch_entries(std::uint64_t start, std::uint64_t end) {
  if (start > end) throw CtError(CtErrc::RangeBeyondTree, "start after end");
  if (!last_sth_ || end >= last_sth_->tree_size) fetch_sth();
  if (end >= last_sth_->tree_size) {
    throw CtError(CtErrc::RangeBeyondTree, "log '" + log_.name + "': entry " + std::to_string(end) +
                                               " is beyond tree size " + std::to_string(last_sth_->tree_size));
  }

  std::vector<RawEntry> out;
  out.reserve(end - start + 1);
  std::uint64_t next = start;
  while (next <= end) {
    auto body = get("/ct/v1/get-entries?start=" + std::to_string(next) + "&end=" + std::to_string(end));
    std::size_t got = 0;
    try {
      auto j = json::parse(body);
      for (const auto& e : j.at("entries")) {
        if (next + got > end) break;
        out.push_back({e.at("leaf_input").get<std::string>(), e.value("extra_data", std::string{})});
        ++got;
      }
    } catch (const json::exception& e) {
      throw CtError(CtErrc::MalformedResponse, "log '" + log_.name + "' get-entries: " + e.what());
    }
    if (got == 0) {
      throw CtError(CtErrc::MalformedResponse, "log '" + log_.name + "' returned no entries at index " +
                                                   std::to_string(next));
    }
    next += got;
  }
  return out;
}

}  // namespace amass::ct

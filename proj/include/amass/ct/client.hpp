#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amass/ct/error.hpp"
#include "amass/ct/leaf.hpp"
#include "amass/time.hpp"

namespace amass::ct {

/// A log to scrape. Temporally sharded logs carry the period their
/// certificates expire in.
struct CtLogDescriptor {
  std::string name;
  std::string base_url;
  std::optional<std::pair<Date, Date>> shard_window;

  /// Throws CtError(InvalidLog) unless base_url is an absolute http(s) URL
  /// and the shard window, when present, is non-empty.
  void validate() const;
};

struct SignedTreeHead {
  std::uint64_t tree_size = 0;
  std::uint64_t timestamp_ms = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{1000};
  /// Uniform jitter added to each wait, as a fraction of the wait.
  double jitter = 0.25;
  std::chrono::seconds timeout{30};
};

/// RFC 6962 read client for one log. Not thread-safe; use one per worker.
class CtLogClient {
 public:
  explicit CtLogClient(CtLogDescriptor log, RetryPolicy retry = {});
  ~CtLogClient();
  CtLogClient(CtLogClient&&) noexcept;
  CtLogClient& operator=(CtLogClient&&) noexcept;

  const CtLogDescriptor& log() const noexcept { return log_; }

  /// GET ct/v1/get-sth. The tree head signature is not verified.
  SignedTreeHead fetch_sth();

  /// Entries [start, end] inclusive, in order. Re-requests the remainder when
  /// the log returns short pages. Throws RangeBeyondTree if end is not below
  /// the tree size.
  std::vector<RawEntry> fetch_entries(std::uint64_t start, std::uint64_t end);

  /// Number of HTTP requests issued so far, including retries.
  std::uint64_t request_count() const noexcept { return requests_; }

 private:
  std::string get(const std::string& path);

  CtLogDescriptor log_;
  RetryPolicy retry_;
  struct Http;
  std::unique_ptr<Http> http_;
  std::optional<SignedTreeHead> last_sth_;
  std::uint64_t requests_ = 0;
};

}  // namespace amass::ct

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amass::ct {

enum class CtErrc {
  HttpError,
  MalformedResponse,
  RangeBeyondTree,
  TreeShrank,
  MalformedLeaf,
  MalformedDer,
  InvalidLog,
  CheckpointMismatch,
};

std::string_view to_string(CtErrc code);

class CtError : public std::runtime_error {
 public:
  CtError(CtErrc code, const std::string& what, int http_status = 0)
      : std::runtime_error(what), code_(code), http_status_(http_status) {}
  CtErrc code() const noexcept { return code_; }
  /// Last HTTP status for HttpError; 0 when the connection itself failed.
  int http_status() const noexcept { return http_status_; }

 private:
  CtErrc code_;
  int http_status_;
};

}  // namespace amass::ct

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace amass {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what, int err = 0) : std::runtime_error(what), errno_(err) {}
  /// errno of the failing system call, or 0.
  int error_number() const noexcept { return errno_; }

 private:
  int errno_;
};

/// Reads text line by line from a plain or gzip-compressed file.
/// Compression is detected from the content, not the file name.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;
  LineReader(LineReader&& other) noexcept;
  LineReader& operator=(LineReader&& other) noexcept;

  /// Next line without its terminator (LF or CRLF). False at end of input.
  bool next(std::string& line);

 private:
  void* gz_ = nullptr;
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a temporary sibling, fsyncs it and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       bool gzip = false);

/// Advisory flock(2) lock held for the lifetime of the object.
class FileLock {
 public:
  enum class Mode { Shared, Exclusive };
  /// Throws IoError if the lock cannot be taken without blocking.
  FileLock(const std::filesystem::path& path, Mode mode);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace amass

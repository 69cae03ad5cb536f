#include "amass/io.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

namespace amass {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void throw_errno(const std::string& what, const fs::path& path) {
  int err = errno;
  throw IoError(what + " " + path.string() + ": " + std::strerror(err), err);
}

void fsync_dir(const fs::path& dir) {
  int fd = ::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

LineReader::LineReader(const fs::path& path) : path_(path) {
  gz_ = gzopen(path.c_str(), "rb");
  if (gz_ == nullptr) throw_errno("cannot open", path);
  gzbuffer(static_cast<gzFile>(gz_), 1 << 17);
}

LineReader::~LineReader() {
  if (gz_ != nullptr) gzclose(static_cast<gzFile>(gz_));
}

LineReader::LineReader(LineReader&& other) noexcept
    : gz_(std::exchange(other.gz_, nullptr)), path_(std::move(other.path_)) {}

LineReader& LineReader::operator=(LineReader&& other) noexcept {
  if (this != &other) {
    if (gz_ != nullptr) gzclose(static_cast<gzFile>(gz_));
    gz_ = std::exchange(other.gz_, nullptr);
    path_ = std::move(other.path_);
  }
  return *this;
}

bool LineReader::next(std::string& line) {
  line.clear();
  auto* gz = static_cast<gzFile>(gz_);
  char buf[8192];
  bool got_any = false;
  while (gzgets(gz, buf, sizeof buf) != nullptr) {
    got_any = true;
    size_t n = std::strlen(buf);
    line.append(buf, n);
    if (n > 0 && buf[n - 1] == '\n') break;
  }
  if (!got_any) {
    int err = 0;
    const char* msg = gzerror(gz, &err);
    if (err != Z_OK && err != Z_BUF_ERROR) {
      throw IoError("read error in " + path_.string() + ": " + msg);
    }
    return false;
  }
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_errno("cannot open", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content, bool gzip) {
  fs::path tmp = path;
  tmp += ".tmp";
  if (gzip) {
    gzFile gz = gzopen(tmp.c_str(), "wb6");
    if (gz == nullptr) throw_errno("cannot create", tmp);
    size_t off = 0;
    while (off < content.size()) {
      auto chunk = static_cast<unsigned>(std::min<size_t>(content.size() - off, 1u << 30));
      if (gzwrite(gz, content.data() + off, chunk) != static_cast<int>(chunk)) {
        gzclose(gz);
        throw IoError("gzip write failed for " + tmp.string());
      }
      off += chunk;
    }
    if (gzclose(gz) != Z_OK) throw IoError("gzip close failed for " + tmp.string());
    int fd = ::open(tmp.c_str(), O_RDONLY);
    if (fd >= 0) {
      ::fsync(fd);
      ::close(fd);
    }
  } else {
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw_errno("cannot create", tmp);
    const char* p = content.data();
    size_t left = content.size();
    while (left > 0) {
      ssize_t w = ::write(fd, p, left);
      if (w < 0) {
        if (errno == EINTR) continue;
        ::close(fd);
        throw_errno("write failed for", tmp);
      }
      p += w;
      left -= static_cast<size_t>(w);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) throw_errno("fsync failed for", tmp);
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) throw_errno("rename failed for", tmp);
  fsync_dir(path.parent_path());
}

FileLock::FileLock(const fs::path& path, Mode mode) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw_errno("cannot open lock", path);
  int op = (mode == Mode::Exclusive ? LOCK_EX : LOCK_SH) | LOCK_NB;
  if (::flock(fd_, op) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw IoError("store is busy (lock held): " + path.string());
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace amass

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rrtlab {

// Shortest round-trip decimal rendering via std::to_chars: locale-free and
// platform-stable.  Emitted CSV bytes are part of the reproducibility
// contract, so all floating-point output funnels through here.
std::string format_double(double v);
std::string format_int(long long v);

class CsvWriter {
public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);  // width must match header
  const std::string& str() const { return buf_; }

private:
  size_t width_ = 0;
  std::string buf_;
};

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);
std::string to_hex(std::uint64_t v);

std::string read_file(const std::string& path);  // throws on failure
void write_file(const std::string& path, const std::string& content);

}  // namespace rrtlab

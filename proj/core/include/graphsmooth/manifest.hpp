#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace graphsmooth {

/// Flat `key = value` record of everything a run needs to reproduce itself:
/// parameters, seeds, artifact version, output file names.  Keys are written
/// in sorted order and no volatile data (timestamps, hosts) is ever stored,
/// so re-running from a manifest regenerates outputs byte for byte.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, int value);
  void set(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;  // throws Error if missing
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace graphsmooth

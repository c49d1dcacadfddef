#include "graphsmooth/manifest.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "graphsmooth/csv.hpp"
#include "graphsmooth/errors.hpp"

namespace graphsmooth {

void Manifest::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos) {
    throw Error("invalid manifest key '" + key + "'");
  }
  if (value.find('\n') != std::string::npos) {
    throw Error("manifest values must be single-line");
  }
  entries_[key] = value;
}

void Manifest::set(const std::string& key, const char* value) {
  set(key, std::string(value));
}

void Manifest::set(const std::string& key, double value) {
  set(key, format_g17(value));
}

void Manifest::set(const std::string& key, std::int64_t value) {
  set(key, std::to_string(value));
}

void Manifest::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void Manifest::set(const std::string& key, int value) {
  set(key, static_cast<std::int64_t>(value));
}

void Manifest::set(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

bool Manifest::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const std::string& Manifest::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw Error("manifest is missing key '" + key + "'");
  }
  return it->second;
}

double Manifest::get_double(const std::string& key) const {
  const std::string& text = get(key);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw Error("manifest key '" + key + "' is not a number: '" + text + "'");
  }
  return value;
}

std::int64_t Manifest::get_int(const std::string& key) const {
  const std::string& text = get(key);
  char* end = nullptr;
  const std::int64_t value = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw Error("manifest key '" + key + "' is not an integer: '" + text + "'");
  }
  return value;
}

std::uint64_t Manifest::get_uint(const std::string& key) const {
  const std::string& text = get(key);
  char* end = nullptr;
  const std::uint64_t value = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw Error("manifest key '" + key + "' is not an integer: '" + text + "'");
  }
  return value;
}

bool Manifest::get_bool(const std::string& key) const {
  const std::string& text = get(key);
  if (text == "true") {
    return true;
  }
  if (text == "false") {
    return false;
  }
  throw Error("manifest key '" + key + "' is not a boolean: '" + text + "'");
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing: " +
                  std::strerror(errno));
  }
  for (const auto& [key, value] : entries_) {
    out << key << " = " << value << '\n';
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

Manifest Manifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading: " +
                  std::strerror(errno));
  }
  Manifest manifest;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const size_t eq = line.find(" = ");
    if (eq == std::string::npos) {
      throw ParseError(path.string(), line_no, "expected 'key = value'");
    }
    manifest.entries_[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return manifest;
}

}  // namespace graphsmooth

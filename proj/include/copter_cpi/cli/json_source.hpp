#pragma once

#include <json.hpp>

#include <cstddef>
#include <map>
#include <string>

#include "copter_cpi/error.hpp"

namespace copter_cpi::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A parsed JSON document that remembers the source line of every value, so
/// validation errors can point at the offending line.
class JsonSource {
 public:
  /// Throws ConfigError with origin and line on malformed JSON.
  static JsonSource parse(const std::string& text, std::string origin);
  /// Reads and parses a file; ConfigError when it cannot be opened.
  static JsonSource load(const std::string& path);

  const nlohmann::json& root() const { return root_; }
  const std::string& origin() const { return origin_; }

  /// Line of the value at a JSON pointer, falling back to the nearest
  /// recorded ancestor; 0 when nothing is known.
  std::size_t line_of(const std::string& pointer) const;

  /// ConfigError("origin:line: message").
  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;

 private:
  nlohmann::json root_;
  std::string origin_;
  std::map<std::string, std::size_t> lines_;
};

}  // namespace copter_cpi::cli

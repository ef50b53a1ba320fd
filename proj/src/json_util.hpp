#pragma once

// Private helpers shared by the JSON readers and writers.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bioinv/io.hpp"

namespace bioinv::detail {

using nlohmann::json;

json parse_document(const std::string& text, const std::string& source);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Walks one JSON object, remembering which keys were read so that leftovers
/// can be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path);

  /// Present and not null.  Marks the key as read either way.
  bool has(const std::string& key);
  const json& at(const std::string& key);
  double number(const std::string& key);
  int integer(const std::string& key);
  std::string text(const std::string& key);
  std::vector<double> vector(const std::string& key);
  std::vector<std::vector<double>> matrix(const std::string& key);
  std::vector<std::string> strings(const std::string& key);
  [[nodiscard]] std::string path(const std::string& key) const;
  void finish() const;  // throws on unknown keys

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_number(const json& v, const std::string& path);
std::vector<double> as_vector(const json& v, const std::string& path);
std::vector<std::vector<double>> as_matrix(const json& v, const std::string& path);

[[noreturn]] void fail(const std::string& path, const std::string& message);

}  // namespace bioinv::detail

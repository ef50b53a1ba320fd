#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace bioinv::detail {

void fail(const std::string& path, const std::string& message) {
  throw ParseError(path.empty() ? message : path + ": " + message);
}

json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // translate the byte offset into line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": syntax error: " << e.what();
    throw ParseError(os.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

ObjectReader::ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) fail(path_, "expected an object");
}

bool ObjectReader::has(const std::string& key) {
  seen_.insert(key);
  return j_.contains(key) && !j_.at(key).is_null();
}

std::string ObjectReader::path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

const json& ObjectReader::at(const std::string& key) {
  seen_.insert(key);
  if (!j_.contains(key)) fail(path(key), "missing required field");
  return j_.at(key);
}

double ObjectReader::number(const std::string& key) { return as_number(at(key), path(key)); }

int ObjectReader::integer(const std::string& key) {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 2e9) fail(path(key), "expected an integer");
  return static_cast<int>(v);
}

std::string ObjectReader::text(const std::string& key) {
  const auto& v = at(key);
  if (!v.is_string()) fail(path(key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> ObjectReader::vector(const std::string& key) { return as_vector(at(key), path(key)); }

std::vector<std::vector<double>> ObjectReader::matrix(const std::string& key) {
  return as_matrix(at(key), path(key));
}

std::vector<std::string> ObjectReader::strings(const std::string& key) {
  const auto& v = at(key);
  if (!v.is_array()) fail(path(key), "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail(path(key) + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

void ObjectReader::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    if (!seen_.count(it.key())) fail(path(it.key()), "unknown field");
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "expected a finite number");
  return d;
}

std::vector<double> as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_vector(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace bioinv::detail

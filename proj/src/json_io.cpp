#include "bwk/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bwk {

Json parse_json_text(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("invalid JSON in " + what);
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

void check_keys(const Json& obj, const std::string& path,
                const std::vector<std::string>& allowed) {
  if (!obj.is_object()) throw SchemaError("expected object at " + path);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed) {
      if (it.key() == k) { ok = true; break; }
    }
    if (!ok) throw SchemaError("unknown key " + path + "." + it.key());
  }
}

const Json& require_field(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing key " + path + "." + key);
  return *it;
}

double get_number(const Json& obj, const std::string& path, const char* key) {
  const Json& v = require_field(obj, path, key);
  if (!v.is_number()) throw SchemaError("expected number at " + path + "." + key);
  return v.get<double>();
}

double get_number_or(const Json& obj, const std::string& path, const char* key, double fallback) {
  if (obj.find(key) == obj.end()) return fallback;
  return get_number(obj, path, key);
}

std::uint64_t get_uint(const Json& obj, const std::string& path, const char* key) {
  const Json& v = require_field(obj, path, key);
  if (!v.is_number_integer() || v.get<double>() < 0)
    throw SchemaError("expected nonnegative integer at " + path + "." + key);
  return v.get<std::uint64_t>();
}

std::uint64_t get_uint_or(const Json& obj, const std::string& path, const char* key,
                          std::uint64_t fallback) {
  if (obj.find(key) == obj.end()) return fallback;
  return get_uint(obj, path, key);
}

bool get_bool_or(const Json& obj, const std::string& path, const char* key, bool fallback) {
  if (obj.find(key) == obj.end()) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw SchemaError("expected boolean at " + path + "." + key);
  return v.get<bool>();
}

std::string get_string(const Json& obj, const std::string& path, const char* key) {
  const Json& v = require_field(obj, path, key);
  if (!v.is_string()) throw SchemaError("expected string at " + path + "." + key);
  return v.get<std::string>();
}

std::string get_string_or(const Json& obj, const std::string& path, const char* key,
                          const std::string& fallback) {
  if (obj.find(key) == obj.end()) return fallback;
  return get_string(obj, path, key);
}

std::vector<double> get_number_array(const Json& obj, const std::string& path, const char* key) {
  const Json& v = require_field(obj, path, key);
  if (!v.is_array()) throw SchemaError("expected array at " + path + "." + key);
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number())
      throw SchemaError("expected number at " + path + "." + key + "[" + std::to_string(k) + "]");
    out.push_back(v[k].get<double>());
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace bwk

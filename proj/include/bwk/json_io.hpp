#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace bwk {

using Json = nlohmann::json;

// schema violations in user-supplied JSON; messages carry the dotted path
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json parse_json_text(const std::string& text, const std::string& what);
Json load_json_file(const std::string& path);

// rejects keys outside `allowed`, reporting them as <path>.<key>
void check_keys(const Json& obj, const std::string& path,
                const std::vector<std::string>& allowed);

const Json& require_field(const Json& obj, const std::string& path, const char* key);
double get_number(const Json& obj, const std::string& path, const char* key);
double get_number_or(const Json& obj, const std::string& path, const char* key, double fallback);
std::uint64_t get_uint(const Json& obj, const std::string& path, const char* key);
std::uint64_t get_uint_or(const Json& obj, const std::string& path, const char* key, std::uint64_t fallback);
bool get_bool_or(const Json& obj, const std::string& path, const char* key, bool fallback);
std::string get_string(const Json& obj, const std::string& path, const char* key);
std::string get_string_or(const Json& obj, const std::string& path, const char* key,
                          const std::string& fallback);
std::vector<double> get_number_array(const Json& obj, const std::string& path, const char* key);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bwk

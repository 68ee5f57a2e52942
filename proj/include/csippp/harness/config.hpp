#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "csippp/core/error.hpp"

namespace csippp {

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Reads values out of a JSON config and remembers every value it hands
/// out (defaults included), so the run manifest can list exactly what was
/// consumed. Paths use '/' separators, e.g. "solver/lambda".
class ConfigReader {
public:
  explicit ConfigReader(nlohmann::json root) : root_(std::move(root)) {
    if (!root_.is_object()) throw ConfigError("config root must be a JSON object");
  }

  bool has(const std::string& path) const { return root_.contains(pointer(path)); }

  template <typename T>
  T get(const std::string& path, const T& fallback) {
    const auto ptr = pointer(path);
    T value = fallback;
    if (root_.contains(ptr)) value = convert<T>(path, root_.at(ptr));
    record(path, value);
    return value;
  }

  template <typename T>
  T require(const std::string& path) {
    const auto ptr = pointer(path);
    if (!root_.contains(ptr)) throw ConfigError("missing required config key '" + path + "'");
    T value = convert<T>(path, root_.at(ptr));
    record(path, value);
    return value;
  }

  // Records a value that was derived from other settings.
  void note(const std::string& path, const nlohmann::json& value) {
    resolved_[pointer(path)] = value;
    consumed_.insert(path);
  }

  const nlohmann::json& resolved() const { return resolved_; }
  const std::set<std::string>& consumed() const { return consumed_; }

  /// Keys present in the input that nothing read.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    collect_unused(root_, "", out);
    return out;
  }

private:
  static nlohmann::json::json_pointer pointer(const std::string& path) {
    return nlohmann::json::json_pointer("/" + path);
  }

  template <typename T>
  static T convert(const std::string& path, const nlohmann::json& j) {
    try {
      return j.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key '" + path + "' has the wrong type");
    }
  }

  template <typename T>
  void record(const std::string& path, const T& value) {
    resolved_[pointer(path)] = value;
    consumed_.insert(path);
  }

  void collect_unused(const nlohmann::json& node, const std::string& prefix,
                      std::vector<std::string>& out) const {
    if (!prefix.empty() && consumed_.count(prefix)) return;
    if (node.is_object()) {
      for (const auto& [k, v] : node.items()) collect_unused(v, prefix.empty() ? k : prefix + "/" + k, out);
      return;
    }
    out.push_back(prefix);
  }

  nlohmann::json root_;
  nlohmann::json resolved_ = nlohmann::json::object();
  std::set<std::string> consumed_;
};

}  // namespace csippp

#pragma once

// Options that can come from the command line, a JSON config file or the
// built-in defaults, in that order of precedence. The effective values are
// echoed into every report.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace regs::cli {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + flag_name(key), var, help)->capture_default_str();
    entries_.push_back(Entry{key, opt, [&var, key](const json& j) {
                          try {
                            var = j.get<T>();
                          } catch (const json::exception&) {
                            throw UsageError("config value for '" + key + "' has the wrong type");
                          }
                        },
                        [&var] { return json(var); }});
    return opt;
  }

  CLI::Option* add_flag(const std::string& key, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + flag_name(key), var, help);
    entries_.push_back(Entry{key, opt, [&var, key](const json& j) {
                          if (!j.is_boolean()) throw UsageError("config value for '" + key + "' must be a boolean");
                          var = j.get<bool>();
                        },
                        [&var] { return json(var); }});
    return opt;
  }

  // Fills every option not given on the command line or by an earlier call
  // from `config`: first top-level keys, then the object named after the
  // subcommand. Unknown keys are an error when `strict`; keys in `skip` are
  // never taken.
  void apply(const json& config, const std::string& section, bool strict = true,
             const std::vector<std::string>& skip = {}) {
    if (config.is_null()) return;
    if (!config.is_object()) throw UsageError("config file must hold a JSON object");
    std::map<std::string, json> merged;
    for (auto it = config.begin(); it != config.end(); ++it) {
      if (!it.value().is_object()) merged[it.key()] = it.value();
    }
    if (config.contains(section) && config[section].is_object()) {
      for (auto it = config[section].begin(); it != config[section].end(); ++it) merged[it.key()] = it.value();
    }
    for (const auto& [key, value] : merged) {
      if (key == "config" || std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
      Entry* e = find(key);
      if (!e) {
        if (strict) throw UsageError("unknown config key '" + key + "' for " + section);
        continue;
      }
      if (e->opt->count() == 0 && !e->from_config) {
        e->from_json(value);
        e->from_config = true;
      }
    }
  }

  json effective() const {
    json j = json::object();
    for (const Entry& e : entries_) j[e.key] = e.to_json();
    return j;
  }

  bool given(const std::string& key) const {
    const Entry* e = find(key);
    return e && e->opt->count() > 0;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> from_json;
    std::function<json()> to_json;
    bool from_config = false;
  };

  static std::string flag_name(std::string key) {
    for (char& c : key)
      if (c == '_') c = '-';
    return key;
  }

  const Entry* find(const std::string& key) const {
    for (const Entry& e : entries_)
      if (e.key == key) return &e;
    return nullptr;
  }

  Entry* find(const std::string& key) {
    for (Entry& e : entries_)
      if (e.key == key) return &e;
    return nullptr;
  }

  CLI::App* app_;
  std::vector<Entry> entries_;
};

}  // namespace regs::cli

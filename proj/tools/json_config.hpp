#pragma once

// CLI11 config reader for JSON files. Objects become sections, so
// {"filter": {"dedup-exact": true}} sets --dedup-exact of the filter subcommand.

#include <istream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace auglang::cli {

class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("unsupported JSON config value: " + v.dump());
  }

  static void walk(const nlohmann::json& obj, const std::vector<std::string>& parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, v] : obj.items()) {
      if (v.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        walk(v, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (v.is_array()) {
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(v));
      }
      items.push_back(std::move(item));
    }
  }
};

}  // namespace auglang::cli

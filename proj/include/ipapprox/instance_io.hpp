#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "ipapprox/apps.hpp"
#include "ipapprox/instance.hpp"

namespace ipapprox {

using Instance = std::variant<GeneralIP, NFoldConfigInstance, NFoldNonnegInstance, SchedulingInstance>;

/// Malformed instance JSON. `path` is the JSON pointer of the offending value.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, const std::string& message)
      : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Reads {"format": 1, "kind": ...} instances, or scheduling files
/// recognised by their "jobs" member.
Instance parse_instance(const nlohmann::json& doc);
Instance load_instance(const std::string& path);

/// "general", "nfold_config", "nfold_nonneg" or "scheduling".
std::string kind_name(const Instance& inst);

nlohmann::json to_json(const GeneralIP& inst);
nlohmann::json to_json(const NFoldConfigInstance& inst);
nlohmann::json to_json(const NFoldNonnegInstance& inst);
nlohmann::json to_json(const SchedulingInstance& inst);
nlohmann::json to_json(const Instance& inst);

nlohmann::json rat_json(const Rat& v);
nlohmann::json int_json(const Int& v);

}  // namespace ipapprox

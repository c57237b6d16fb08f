#pragma once

#include <json.hpp>

#include "ipapprox/oracle.hpp"
#include "ipapprox/result.hpp"

namespace ipapprox {

/// Exact values are strings; each gets a sibling "<name>_approx" double.
nlohmann::json report_json(const ApproxResult& result);
nlohmann::json oracle_json(const OracleResult& result);

/// Two-space indented dump with a trailing newline.
std::string dump_report(const nlohmann::json& doc);

}  // namespace ipapprox

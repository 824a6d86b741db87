#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rgspur/schedule.hpp"

namespace rgspur {

/// A schedule document is not well-formed JSON or has the wrong shape.
class ScheduleFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Nodes: {"type":"link","hop":i} | {"type":"swap","parts":[...]} |
/// {"type":"purify","stab":"YY","keep":{...},"sacrifice":{...}}.
ScheduleExpr schedule_from_json(const nlohmann::json &doc);
nlohmann::json schedule_to_json(const ScheduleExpr &expr);

ScheduleExpr parse_schedule(std::string_view text);
ScheduleExpr load_schedule_file(const std::filesystem::path &path);

} // namespace rgspur

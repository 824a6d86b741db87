#include "rgspur/schedule_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "overloaded.hpp"

namespace rgspur {

namespace {

using detail::overloaded;

const nlohmann::json &field(const nlohmann::json &node, const char *key) {
    if (!node.contains(key)) {
        throw ScheduleFormatError(fmt::format("schedule node missing '{}': {}", key, node.dump()));
    }
    return node.at(key);
}

} // namespace

ScheduleExpr schedule_from_json(const nlohmann::json &doc) {
    if (!doc.is_object()) {
        throw ScheduleFormatError(fmt::format("schedule node must be an object: {}", doc.dump()));
    }
    const nlohmann::json &type = field(doc, "type");
    if (!type.is_string()) {
        throw ScheduleFormatError("schedule node 'type' must be a string");
    }
    const std::string kind = type.get<std::string>();
    if (kind == "link") {
        const nlohmann::json &hop = field(doc, "hop");
        if (!hop.is_number_unsigned()) {
            throw ScheduleFormatError(fmt::format("link 'hop' must be a non-negative integer: {}", doc.dump()));
        }
        return ScheduleExpr::link(hop.get<std::size_t>());
    }
    if (kind == "swap") {
        const nlohmann::json &parts = field(doc, "parts");
        if (!parts.is_array()) {
            throw ScheduleFormatError("swap 'parts' must be an array");
        }
        std::vector<ScheduleExpr> children;
        for (const nlohmann::json &p : parts) {
            children.push_back(schedule_from_json(p));
        }
        return ScheduleExpr::swap(std::move(children));
    }
    if (kind == "purify") {
        const nlohmann::json &stab = field(doc, "stab");
        if (!stab.is_string()) {
            throw ScheduleFormatError("purify 'stab' must be a string");
        }
        Stabilizer s;
        try {
            s = parse_stabilizer(stab.get<std::string>());
        } catch (const ParameterError &e) {
            throw ScheduleFormatError(e.what());
        }
        return ScheduleExpr::purify(s, schedule_from_json(field(doc, "keep")), schedule_from_json(field(doc, "sacrifice")));
    }
    throw ScheduleFormatError(fmt::format("unknown schedule node type '{}'", kind));
}

nlohmann::json schedule_to_json(const ScheduleExpr &expr) {
    return expr.visit(overloaded{
        [](const ScheduleExpr::Link &l) { return nlohmann::json{{"type", "link"}, {"hop", l.hop}}; },
        [](const ScheduleExpr::Swap &s) {
            nlohmann::json parts = nlohmann::json::array();
            for (const ScheduleExpr &p : s.parts) {
                parts.push_back(schedule_to_json(p));
            }
            return nlohmann::json{{"type", "swap"}, {"parts", parts}};
        },
        [](const ScheduleExpr::Purify &p) {
            return nlohmann::json{{"type", "purify"},
                                  {"stab", std::string(to_string(p.stab))},
                                  {"keep", schedule_to_json(p.keep)},
                                  {"sacrifice", schedule_to_json(p.sacrifice)}};
        },
    });
}

ScheduleExpr parse_schedule(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ScheduleFormatError(fmt::format("schedule is not valid JSON: {}", e.what()));
    }
    return schedule_from_json(doc);
}

ScheduleExpr load_schedule_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ScheduleFormatError(fmt::format("cannot read schedule file '{}'", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_schedule(buffer.str());
}

} // namespace rgspur

#pragma once

#include <nlohmann/json.hpp>

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace lcsharp::cli {

using json = nlohmann::json;

enum class Status { ok, violated, error };

inline std::string to_string(Status s)
{
    switch (s) {
    case Status::ok: return "ok";
    case Status::violated: return "violated";
    default: return "error";
    }
}

inline Status status_from_string(const std::string& s)
{
    if (s == "ok") return Status::ok;
    if (s == "violated") return Status::violated;
    if (s == "error") return Status::error;
    throw json::other_error::create(501, "unknown status '" + s + "'", nullptr);
}

/// One result of a CLI command, serialisable to JSON.
struct OutputRecord {
    std::string command;
    json inputs = json::object();
    json outputs = json::object();
    json tolerances = json::object();
    Status status = Status::ok;

    json to_json() const
    {
        return json{{"command", command},
                    {"inputs", inputs},
                    {"outputs", outputs},
                    {"tolerances", tolerances},
                    {"status", to_string(status)}};
    }

    static OutputRecord from_json(const json& j)
    {
        OutputRecord r;
        r.command = j.at("command").get<std::string>();
        r.inputs = j.at("inputs");
        r.outputs = j.at("outputs");
        r.tolerances = j.at("tolerances");
        r.status = status_from_string(j.at("status").get<std::string>());
        return r;
    }

    std::string serialize(int indent = 2) const { return to_json().dump(indent); }
    static OutputRecord parse(const std::string& text) { return from_json(json::parse(text)); }

    bool operator==(const OutputRecord&) const = default;
};

/// Rows of a profile as CSV with the given column names.
inline std::string profile_csv(const std::vector<std::pair<double, double>>& rows, const std::string& x_name,
                               const std::string& y_name)
{
    std::string out = x_name + "," + y_name + "\n";
    char buf[64];
    for (const auto& [x, y] : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
        out += buf;
    }
    return out;
}

} // namespace lcsharp::cli

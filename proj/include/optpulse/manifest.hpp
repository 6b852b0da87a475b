#pragma once

// Run manifest embedded in every output file. Worker count is an execution
// detail and is excluded, so runs that differ only in parallelism produce
// byte-identical output apart from the timestamp.

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>

namespace optpulse {

inline const char* version_string() { return "optpulse 0.1.0"; }

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::string version = version_string();
    std::string timestamp;  // ISO-8601 UTC
    nlohmann::json config = nlohmann::json::object();

    static std::string now_utc() {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                      tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
        return buf;
    }

    nlohmann::json to_json() const {
        return {{"command", command},
                {"seed", seed},
                {"version", version},
                {"timestamp", timestamp},
                {"config", config}};
    }
};

}  // namespace optpulse

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kpzlab/harness.hpp"

namespace kpzlab {

enum class CheckStatus { Pass, Fail, Recorded };

const char* to_string(CheckStatus s);

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::Recorded;
    double value = 0.0;
    std::string relation;  // e.g. "<= 0", ">= 0.9"; empty for recorded values
    std::string detail;
};

struct SuiteReport {
    std::string id;
    int criterion = 0;  // 0 when the suite maps to no acceptance criterion
    std::string title;
    std::vector<Check> checks;
    json counts = json::object();
    json tolerances = json::object();
    json params = json::object();
    std::vector<std::string> notes;
    std::vector<std::string> outputs;
    double seconds = 0.0;

    bool passed() const;
    int64_t failures() const;
    json to_json() const;
    // One summary line.
    std::string line() const;
};

struct SuiteOptions {
    uint64_t seed = 1;
    std::optional<int64_t> n;     // overrides the suite's default scale
    Tolerances tol;
    int threads = 1;
    Cache* cache = nullptr;
    std::string out_dir;          // figures and CSVs go here when set
    std::function<void(const std::string&)> progress;
};

struct SuiteInfo {
    std::string id;
    int criterion = 0;
    std::string title;
    std::function<SuiteReport(const SuiteOptions&)> run;
};

const std::vector<SuiteInfo>& suites();
const SuiteInfo* find_suite(const std::string& id);
SuiteReport run_suite(const std::string& id, const SuiteOptions& opt);

}  // namespace kpzlab

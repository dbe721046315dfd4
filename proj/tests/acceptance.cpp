#include <CLI11.hpp>

#include <iostream>

#include "kpzlab/suites.hpp"

using namespace kpzlab;

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria: one pass/fail line per criterion"};
    std::string which = "all", out;
    SuiteOptions opt;
    app.add_option("suite", which, "suite id or all")->capture_default_str();
    app.add_option("--out", out, "directory for reports and figures");
    app.add_option("--seed", opt.seed, "base seed")->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    std::vector<std::string> ids;
    for (const auto& s : suites())
        if (s.criterion > 0 && (which == "all" || which == s.id)) ids.push_back(s.id);
    if (ids.empty()) {
        std::cerr << "unknown suite " << which << '\n';
        return 2;
    }
    std::unique_ptr<Cache> cache;
    if (!out.empty()) {
        opt.out_dir = out;
        cache = std::make_unique<Cache>(std::filesystem::path(out) / ".kpzlab-cache");
        opt.cache = cache.get();
    }
    bool ok = true;
    for (const auto& id : ids) {
        try {
            const SuiteReport r = run_suite(id, opt);
            std::cout << r.line() << std::endl;
            for (const auto& c : r.checks)
                if (c.status == CheckStatus::Fail) std::cout << "    failed: " << c.name << " = " << c.value << " (needs " << c.relation << ")" << std::endl;
            for (const auto& n : r.notes) std::cout << "    note: " << n << std::endl;
            if (!out.empty()) write_file(std::filesystem::path(out) / ("report_" + id + ".json"), r.to_json().dump(2) + "\n");
            ok &= r.passed();
        } catch (const Error& e) {
            std::cout << "FAIL " << id << ": " << e.kind() << ": " << e.what() << std::endl;
            ok = false;
        }
    }
    return ok ? 0 : 1;
}

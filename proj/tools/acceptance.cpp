// kato_acceptance: runs the thirteen acceptance checks and prints one
// pass/fail line per check. Exit status is 0 only when every check passes.

#include "kato/acceptance.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::string report_path;
    std::vector<int> only;
    app.add_option("--report", report_path, "write the report JSON here");
    app.add_option("--only", only, "check numbers to run (all when omitted)")->check(CLI::Range(1, 13));
    CLI11_PARSE(app, argc, argv);

    kato::VerifyOptions o;
    o.only.insert(only.begin(), only.end());
    o.on_result = [](const kato::Criterion& c) { std::cout << kato::format_criterion(c) << std::endl; };
    const kato::Report rep = kato::verify_all(o);

    std::size_t passed = 0;
    for (const auto& c : rep.criteria) passed += c.pass;
    std::cout << passed << "/" << rep.criteria.size() << " checks passed in " << kato::format_number(rep.seconds) << " s\n";

    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << report_path << "'\n";
            return 2;
        }
        out << kato::to_json(rep).dump(2) << "\n";
    }
    return rep.pass() ? 0 : 1;
}

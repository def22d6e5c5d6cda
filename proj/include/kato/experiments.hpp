#pragma once

#include "kato/config.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace kato {

using ordered_json = nlohmann::ordered_json;

struct Criterion {
    std::string id;
    std::string description;
    bool pass = false;
    double value = 0.0;
    std::string relation;  // "<=", ">=" or "within"
    double threshold = 0.0;
    double tolerance = 0.0;  // only for "within": |value - threshold| <= tolerance
    std::string detail;
};

struct Report {
    std::string name;
    std::string kind;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // per-step measurements, one value per column
    ordered_json fits = ordered_json::object();
    ordered_json derived = ordered_json::object();
    std::vector<Criterion> criteria;
    std::vector<std::string> log;  // warnings and notes, in order
    // Kept apart so the rest of the report is reproducible byte for byte.
    std::string started;
    double seconds = 0.0;

    bool pass() const;
    void add_row(std::vector<double> row);
};

Criterion criterion_at_most(std::string id, std::string description, double value, double bound);
Criterion criterion_at_least(std::string id, std::string description, double value, double bound);
Criterion criterion_within(std::string id, std::string description, double value, double target, double tolerance);

ordered_json environment_stamp();
ordered_json to_json(const Report& r);
std::string to_csv(const Report& r);
std::string to_gnuplot(const Report& r);

// Writes <output>/<name>.json, .csv and .dat; returns the JSON path.
std::string write_report(const Report& r, const std::string& output_dir);

// Validates the configuration, runs the experiment and fills the report.
Report run(const ExperimentConfig& config);

}  // namespace kato

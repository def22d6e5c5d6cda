#pragma once

#include "kato/norms.hpp"
#include "kato/opnorm.hpp"
#include "kato/symbols.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kato {

// A bad or inconsistent configuration value; field() is the key to fix.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class ExperimentKind { scaling, transfer, maximal, wavepacket_audit, sparse_audit, decay_audit };
std::string to_string(ExperimentKind k);

struct ExperimentConfig {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::scaling;
    std::string symbol_text = "power,m=2,n=1";
    SymbolSpec symbol = SymbolSpec::power(2.0, 1);
    int n = 1;

    // Periodic grid for wave-packet audits.
    std::size_t grid_N = 1024;
    double grid_L = 256.0;

    std::vector<double> R = {8, 16, 32, 64};
    double q = 2.0, r = 2.0, r_tilde = 4.0, alpha = 0.5;
    NormOrder order = NormOrder::xt;
    WindowSpec window;
    double dx = 1.0;

    std::uint64_t seed = 1;
    std::size_t samples = 20;          // random fields / cube sets
    std::size_t subcollections = 100;  // almost-orthogonality draws
    unsigned K = 3;
    std::size_t set_size = 128;
    std::int64_t box_width = 1000000;
    std::vector<double> zeta = {16, 32, 64, 128, 256};
    double xi_star = 1.25;

    double tolerance = 0.1;
    double audit_tolerance = 1e-10;
    double orthogonality_ceiling = 4.0;
    std::size_t ascent_steps = 50, ascent_restarts = 5;
    std::size_t power_restarts = 3;

    std::string output = "out";
};

// Line-oriented key = value; '#' starts a comment; unknown or repeated keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig read_config(const std::string& path);

// Every key with its resolved value, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& c);

// Checks the preconditions of the modules the experiment will call.
void validate(const ExperimentConfig& c);

std::string format_number(double v);  // shortest round-trip form, "inf" for infinity

}  // namespace kato

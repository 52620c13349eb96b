#ifndef NETDETECT_CONFIG_HPP
#define NETDETECT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "netdetect/experiments.hpp"

namespace netdetect {

/// Carries every problem found in a config, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors);
    std::vector<std::string> errors_;
};

/// One experiment: a scenario description plus run settings. Parsed from
/// sectioned key = value text:
///
///   [scenario]
///   generator = cluster
///   n = 200
///   p = 200
///   sigma_a = 0.3
///
///   [run]
///   policy = chernoff
///   alpha = 0.1
///   beta = 0.1
///   trials = 2000
///   seed = 7
struct ExperimentConfig {
    std::string generator;  // nearest-neighbor | replicated-subgraph | cluster |
                            // two-cluster | model-files
    std::map<std::string, double> scenario_params;
    std::string f0_path, f1_path;  // model-files generator only

    std::string policy = "chernoff";
    double alpha = 0.1;
    double beta = 0.1;
    int trials = 1000;
    int max_subset_size = 4;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::string out_path;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Inverse of parse_config up to formatting: parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Instantiates the configured scenario (generators draw from rng).
Scenario build_scenario(const ExperimentConfig& config, std::mt19937_64& rng);

}  // namespace netdetect

#endif

#include "netdetect/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "netdetect/model_io.hpp"

namespace netdetect {

std::string ConfigError::join(const std::vector<std::string>& errors) {
    std::string out = "config errors:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

namespace {

const std::set<std::string> kGenerators = {"nearest-neighbor", "replicated-subgraph", "cluster",
                                           "two-cluster", "model-files"};

/// Required numeric parameters per generator; anything else is unknown.
const std::map<std::string, std::vector<std::string>> kScenarioParams = {
    {"nearest-neighbor", {"n", "M", "a"}},
    {"replicated-subgraph", {"copies", "strong_corr", "weak_corr"}},
    {"cluster", {"n", "p", "sigma_a"}},
    {"two-cluster", {"n", "p", "a_corr", "b_corr"}},
    {"model-files", {}},
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& s, double& out) {
    size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

struct RawConfig {
    std::map<std::string, std::string> scenario;
    std::map<std::string, std::string> run;
};

RawConfig split_sections(const std::string& text, std::vector<std::string>& errors) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "scenario" && section != "run")
                errors.push_back("line " + std::to_string(line_no) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key = value, got '" +
                             t + "'");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) {
            errors.push_back("line " + std::to_string(line_no) + ": empty key or value");
            continue;
        }
        auto& dest = section == "scenario" ? raw.scenario : raw.run;
        if (section.empty())
            errors.push_back("line " + std::to_string(line_no) + ": key '" + key +
                             "' outside any section");
        else if (!dest.emplace(key, value).second)
            errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return raw;
}

void parse_scenario(const RawConfig& raw, ExperimentConfig& cfg,
                    std::vector<std::string>& errors) {
    auto it = raw.scenario.find("generator");
    if (it == raw.scenario.end()) {
        errors.push_back("[scenario] generator is required");
        return;
    }
    cfg.generator = it->second;
    if (!kGenerators.count(cfg.generator)) {
        errors.push_back("[scenario] unknown generator '" + cfg.generator + "'");
        return;
    }
    const auto& expected = kScenarioParams.at(cfg.generator);
    for (const auto& key : expected) {
        auto p = raw.scenario.find(key);
        if (p == raw.scenario.end()) {
            errors.push_back("[scenario] " + cfg.generator + " requires key '" + key + "'");
            continue;
        }
        double v;
        if (!parse_number(p->second, v))
            errors.push_back("[scenario] key '" + key + "' is not a number: '" + p->second + "'");
        else
            cfg.scenario_params[key] = v;
    }
    for (const auto& [key, value] : raw.scenario) {
        if (key == "generator") continue;
        if (cfg.generator == "model-files" && (key == "f0" || key == "f1")) {
            (key == "f0" ? cfg.f0_path : cfg.f1_path) = value;
            continue;
        }
        if (std::find(expected.begin(), expected.end(), key) == expected.end())
            errors.push_back("[scenario] unknown key '" + key + "' for generator " +
                             cfg.generator);
    }
    if (cfg.generator == "model-files") {
        if (cfg.f0_path.empty()) errors.push_back("[scenario] model-files requires key 'f0'");
        if (cfg.f1_path.empty()) errors.push_back("[scenario] model-files requires key 'f1'");
    }
}

void parse_run(const RawConfig& raw, ExperimentConfig& cfg, std::vector<std::string>& errors) {
    auto number = [&](const std::string& key, const std::string& value, double& out) {
        if (!parse_number(value, out)) {
            errors.push_back("[run] key '" + key + "' is not a number: '" + value + "'");
            return false;
        }
        return true;
    };
    for (const auto& [key, value] : raw.run) {
        double v;
        if (key == "policy") {
            try {
                policy_from_name(value);
                cfg.policy = value;
            } catch (const std::invalid_argument& e) {
                errors.push_back(std::string("[run] ") + e.what());
            }
        } else if (key == "alpha" || key == "beta") {
            if (number(key, value, v)) {
                if (v <= 0.0 || v >= 1.0)
                    errors.push_back("[run] key '" + key + "' must lie in (0,1), got " + value);
                else
                    (key == "alpha" ? cfg.alpha : cfg.beta) = v;
            }
        } else if (key == "trials") {
            if (number(key, value, v)) {
                if (v < 1 || v != static_cast<int>(v))
                    errors.push_back("[run] key 'trials' must be a positive integer, got " +
                                     value);
                else
                    cfg.trials = static_cast<int>(v);
            }
        } else if (key == "max_subset_size") {
            if (number(key, value, v)) {
                if (v < 1 || v != static_cast<int>(v))
                    errors.push_back(
                        "[run] key 'max_subset_size' must be a positive integer, got " + value);
                else
                    cfg.max_subset_size = static_cast<int>(v);
            }
        } else if (key == "seed") {
            if (number(key, value, v)) {
                if (v < 0 || v != static_cast<std::uint64_t>(v))
                    errors.push_back("[run] key 'seed' must be a nonnegative integer, got " +
                                     value);
                else {
                    cfg.seed = static_cast<std::uint64_t>(v);
                    cfg.has_seed = true;
                }
            }
        } else if (key == "out") {
            cfg.out_path = value;
        } else {
            errors.push_back("[run] unknown key '" + key + "'");
        }
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    RawConfig raw = split_sections(text, errors);
    ExperimentConfig cfg;
    parse_scenario(raw, cfg, errors);
    parse_run(raw, cfg, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    std::ostringstream out;
    char buf[64];
    out << "[scenario]\ngenerator = " << config.generator << '\n';
    for (const auto& [key, value] : config.scenario_params) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << key << " = " << buf << '\n';
    }
    if (config.generator == "model-files")
        out << "f0 = " << config.f0_path << "\nf1 = " << config.f1_path << '\n';
    out << "\n[run]\npolicy = " << config.policy << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", config.alpha);
    out << "alpha = " << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", config.beta);
    out << "beta = " << buf << '\n';
    out << "trials = " << config.trials << '\n';
    out << "max_subset_size = " << config.max_subset_size << '\n';
    if (config.has_seed) out << "seed = " << config.seed << '\n';
    if (!config.out_path.empty()) out << "out = " << config.out_path << '\n';
    return out.str();
}

Scenario build_scenario(const ExperimentConfig& config, std::mt19937_64& rng) {
    const auto& p = config.scenario_params;
    if (config.generator == "nearest-neighbor")
        return gen_nearest_neighbor(static_cast<int>(p.at("n")), p.at("M"), p.at("a"), rng);
    if (config.generator == "replicated-subgraph")
        return gen_replicated_subgraph(static_cast<int>(p.at("copies")), p.at("strong_corr"),
                                       p.at("weak_corr"));
    if (config.generator == "cluster")
        return gen_cluster(static_cast<int>(p.at("n")), static_cast<int>(p.at("p")),
                           p.at("sigma_a"), rng);
    if (config.generator == "two-cluster")
        return gen_two_cluster(static_cast<int>(p.at("n")), static_cast<int>(p.at("p")),
                               p.at("a_corr"), p.at("b_corr"), rng);
    if (config.generator == "model-files") {
        GaussianModel f0 = read_model_file(config.f0_path);
        GaussianModel f1 = read_model_file(config.f1_path);
        return {HypothesisPair(std::move(f0), std::move(f1)), "model-files",
                "f0=" + config.f0_path + " f1=" + config.f1_path};
    }
    throw std::invalid_argument("build_scenario: unknown generator '" + config.generator + "'");
}

}  // namespace netdetect

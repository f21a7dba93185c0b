#ifndef HQST_SCENARIO_HPP
#define HQST_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hqst/analysis.hpp"

// Scenario configuration: sectioned key = value text, flags layered on top.

namespace hqst {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    // keys are "section.key"; values raw strings
    std::map<std::string, std::string> kv;

    static Config parse_file(const std::string& path);
    static Config parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv[key] = value; }

    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    // canonical serialization (sorted keys), used for the provenance hash
    std::string canonical() const;
};

std::uint64_t fnv1a64(const std::string& text);

struct AxisConfig {
    ErrorVar var = ErrorVar::delta_omega0;
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;

    AxisSpec spec() const { return {var, lo, hi, count}; }
};

ErrorVar parse_error_var(const std::string& name);
const char* error_var_name(ErrorVar var);

// "lo:hi:count"
AxisConfig parse_axis_range(ErrorVar var, const std::string& range);

struct Scenario {
    LinkParams link;
    // unitary overrides; unset fields default to the ideal values
    std::optional<double> omega0, xi, T;
    double t_l = 10.0;

    std::optional<AxisConfig> axis1, axis2;
    std::size_t ode_subsample = 0;

    std::string decay_model = "large-detuning";
    std::vector<double> decay_C1{1.0, 5.0, 20.0};
    std::vector<double> decay_r{0.25, 5.0};

    double budget_C_em = 5.0, budget_C_cav = 5.0, budget_x = 0.0;
    std::vector<double> ecz_C0{5.0, 15.0};
    std::vector<double> ecz_x{0.0, 1.0};

    std::string output_path;
    std::uint64_t seed = 42;
    int jobs = 0;
    std::size_t validate_points = 25;

    static Scenario from_config(const Config& cfg);

    UnitaryParams resolve_unitary(const ReferenceScenario& ref) const;
    std::string hash_hex(const Config& cfg) const;
};

}  // namespace hqst

#endif

#include "hqst/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hqst {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.kv[(section.empty() ? key : section + "." + key)] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

double Config::get_num(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string& v = it->second;
    if (v == "inf" || v == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': not a number: '" + v + "'");
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::uint64_t out = 0;
    const auto& v = it->second;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("config field '" + key + "': not an integer: '" + v + "'");
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ErrorVar parse_error_var(const std::string& name) {
    if (name == "omega0" || name == "domega0") return ErrorVar::delta_omega0;
    if (name == "lxi" || name == "xi") return ErrorVar::delta_lxi;
    if (name == "T" || name == "dT") return ErrorVar::delta_T;
    throw ConfigError("unknown error variable '" + name +
                      "' (expected omega0, lxi, or T)");
}

const char* error_var_name(ErrorVar var) {
    switch (var) {
        case ErrorVar::delta_omega0: return "domega0";
        case ErrorVar::delta_lxi: return "dlxi";
        case ErrorVar::delta_T: return "dT";
    }
    return "?";
}

AxisConfig parse_axis_range(ErrorVar var, const std::string& range) {
    AxisConfig ax;
    ax.var = var;
    double lo = 0.0, hi = 0.0;
    unsigned long count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(range);
    if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' ||
        count < 2 || !(ss >> std::ws).eof())
        throw ConfigError("bad axis range '" + range + "' (expected lo:hi:count)");
    ax.lo = lo;
    ax.hi = hi;
    ax.count = count;
    return ax;
}

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

Scenario Scenario::from_config(const Config& cfg) {
    Scenario sc;
    sc.link.gamma1 = cfg.get_num("link.gamma1", sc.link.gamma1);
    sc.link.gamma2 = cfg.get_num("link.gamma2", sc.link.gamma2);
    sc.link.zeta = cfg.get_num("link.zeta", sc.link.zeta);
    sc.link.k = cfg.get_num("link.k", sc.link.k);

    auto opt_field = [&](const char* key) -> std::optional<double> {
        const std::string v = cfg.get_str(key, "ideal");
        if (v == "ideal") return std::nullopt;
        return cfg.get_num(key, 0.0);
    };
    sc.omega0 = opt_field("unitary.omega0");
    sc.xi = opt_field("unitary.xi");
    sc.T = opt_field("unitary.T");
    sc.t_l = cfg.get_num("unitary.t_l", sc.t_l);

    auto axis = [&](const char* akey, const char* rkey) -> std::optional<AxisConfig> {
        if (!cfg.has(akey)) return std::nullopt;
        const ErrorVar var = parse_error_var(cfg.get_str(akey, ""));
        if (!cfg.has(rkey))
            throw ConfigError(std::string("config: ") + akey + " given without " + rkey);
        return parse_axis_range(var, cfg.get_str(rkey, ""));
    };
    sc.axis1 = axis("sweep.axis1", "sweep.range1");
    sc.axis2 = axis("sweep.axis2", "sweep.range2");
    sc.ode_subsample =
        static_cast<std::size_t>(cfg.get_u64("sweep.ode_subsample", 0));

    sc.decay_model = cfg.get_str("decay.model", sc.decay_model);
    if (cfg.has("decay.C1")) sc.decay_C1 = parse_list(cfg.get_str("decay.C1", ""));
    if (cfg.has("decay.r")) sc.decay_r = parse_list(cfg.get_str("decay.r", ""));

    sc.budget_C_em = cfg.get_num("budget.C_em", sc.budget_C_em);
    sc.budget_C_cav = cfg.get_num("budget.C_cav", sc.budget_C_cav);
    sc.budget_x = cfg.get_num("budget.x_over_xtl", sc.budget_x);
    if (cfg.has("ecz.C0")) sc.ecz_C0 = parse_list(cfg.get_str("ecz.C0", ""));
    if (cfg.has("ecz.x_over_xtl")) sc.ecz_x = parse_list(cfg.get_str("ecz.x_over_xtl", ""));

    sc.output_path = cfg.get_str("output.path", "");
    sc.seed = cfg.get_u64("run.seed", sc.seed);
    sc.jobs = static_cast<int>(cfg.get_u64("run.jobs", 0));
    sc.validate_points =
        static_cast<std::size_t>(cfg.get_u64("run.validate_points", sc.validate_points));
    return sc;
}

UnitaryParams Scenario::resolve_unitary(const ReferenceScenario& ref) const {
    UnitaryParams u;
    u.omega0 = omega0.value_or(ref.ideal.omega0_i);
    u.xi = xi.value_or(ref.ideal.xi_i);
    u.T = T.value_or(ref.ideal.T_i_star);
    u.t_l = t_l;
    return u;
}

std::string Scenario::hash_hex(const Config& cfg) const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cfg.canonical())));
    return buf;
}

}  // namespace hqst

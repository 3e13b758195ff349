// SPDX-License-Identifier: Apache-2.0
#include "lmp/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace lmp {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

double number_or_nan(const json& v, const char* key) {
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number()) throw std::invalid_argument(std::string("config: ") + key +
                                                    " must be a number or null");
    return v.get<double>();
}

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw std::invalid_argument("config: unknown key '" +
                                        (where.empty() ? key : where + "." + key) + "'");
}

template <typename T>
void get_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

json to_json(const BenchmarkConfig& c) {
    json j;
    j["n"] = c.n;
    j["b"] = c.b;
    j["m_values"] = c.m_values;
    j["p"] = c.p;
    j["bomp_k"] = c.bomp_k;
    j["k_max"] = c.k_max;
    j["snr_grid_db"] = c.snr_grid_db;
    j["trials_per_cell"] = c.trials_per_cell;
    j["seed"] = c.seed;
    j["methods"] = c.methods;
    j["snr_mode"] = c.snr_mode;
    j["band_start_hz"] = c.band_start_hz;
    j["band_stop_hz"] = c.band_stop_hz;
    j["dictionary"] = {{"tau_step", c.dictionary.tau_step},
                       {"rho_set", c.dictionary.rho_set},
                       {"halfperiod_set", c.dictionary.halfperiod_set},
                       {"cap", c.dictionary.cap},
                       {"candidates_per_step", c.dictionary.candidates_per_step}};
    j["link_budget"] = {{"tx_power_dbm", c.link_budget.tx_power_dbm},
                        {"rx_gain_dbi", c.link_budget.rx_gain_dbi},
                        {"path_loss_exponent", c.link_budget.path_loss_exponent},
                        {"reference_distance_m", c.link_budget.reference_distance_m},
                        {"reference_loss_db", number_or_null(c.link_budget.reference_loss_db)},
                        {"min_distance_m", c.link_budget.min_distance_m},
                        {"max_distance_m", c.link_budget.max_distance_m}};
    j["noise"] = {{"temperature_k", c.noise.temperature_k},
                  {"noise_figure_db", c.noise.noise_figure_db},
                  {"bandwidth_hz", number_or_null(c.noise.bandwidth_hz)}};
    return j;
}

BenchmarkConfig from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: document must be an object");
    check_keys(j, "",
               {"n", "b", "m_values", "p", "bomp_k", "k_max", "snr_grid_db",
                "trials_per_cell", "seed", "methods", "snr_mode", "band_start_hz",
                "band_stop_hz", "dictionary", "link_budget", "noise"});
    BenchmarkConfig c;
    get_if(j, "n", c.n);
    get_if(j, "b", c.b);
    get_if(j, "m_values", c.m_values);
    get_if(j, "p", c.p);
    if (j.contains("bomp_k"))
        c.bomp_k = j.at("bomp_k").get<int>();
    else
        c.bomp_k = c.b - 1;
    get_if(j, "k_max", c.k_max);
    get_if(j, "snr_grid_db", c.snr_grid_db);
    get_if(j, "trials_per_cell", c.trials_per_cell);
    get_if(j, "seed", c.seed);
    get_if(j, "methods", c.methods);
    get_if(j, "snr_mode", c.snr_mode);
    get_if(j, "band_start_hz", c.band_start_hz);
    get_if(j, "band_stop_hz", c.band_stop_hz);
    if (j.contains("dictionary")) {
        const json& d = j.at("dictionary");
        check_keys(d, "dictionary",
                   {"tau_step", "rho_set", "halfperiod_set", "cap", "candidates_per_step"});
        get_if(d, "tau_step", c.dictionary.tau_step);
        get_if(d, "rho_set", c.dictionary.rho_set);
        get_if(d, "halfperiod_set", c.dictionary.halfperiod_set);
        get_if(d, "cap", c.dictionary.cap);
        get_if(d, "candidates_per_step", c.dictionary.candidates_per_step);
    }
    if (j.contains("link_budget")) {
        const json& l = j.at("link_budget");
        check_keys(l, "link_budget",
                   {"tx_power_dbm", "rx_gain_dbi", "path_loss_exponent",
                    "reference_distance_m", "reference_loss_db", "min_distance_m",
                    "max_distance_m"});
        get_if(l, "tx_power_dbm", c.link_budget.tx_power_dbm);
        get_if(l, "rx_gain_dbi", c.link_budget.rx_gain_dbi);
        get_if(l, "path_loss_exponent", c.link_budget.path_loss_exponent);
        get_if(l, "reference_distance_m", c.link_budget.reference_distance_m);
        if (l.contains("reference_loss_db"))
            c.link_budget.reference_loss_db =
                number_or_nan(l.at("reference_loss_db"), "link_budget.reference_loss_db");
        get_if(l, "min_distance_m", c.link_budget.min_distance_m);
        get_if(l, "max_distance_m", c.link_budget.max_distance_m);
    }
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        check_keys(n, "noise", {"temperature_k", "noise_figure_db", "bandwidth_hz"});
        get_if(n, "temperature_k", c.noise.temperature_k);
        get_if(n, "noise_figure_db", c.noise.noise_figure_db);
        if (n.contains("bandwidth_hz"))
            c.noise.bandwidth_hz = number_or_nan(n.at("bandwidth_hz"), "noise.bandwidth_hz");
    }
    return c;
}

}  // namespace

bool BenchmarkConfig::operator==(const BenchmarkConfig& o) const {
    return serialize_config(*this) == serialize_config(o);
}

BenchmarkConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    BenchmarkConfig c = from_json(j);
    validate_config(c);
    return c;
}

std::string serialize_config(const BenchmarkConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string apply_override(const std::string& json_text, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("config: --set expects key=value, got '" + assignment + "'");
    std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    for (auto& ch : key)
        if (ch == '.') ch = '/';
    json j = json::parse(json_text);
    json parsed_value;
    try {
        parsed_value = json::parse(value);
    } catch (...) {
        parsed_value = value;  // bare strings allowed unquoted
    }
    j[json::json_pointer("/" + key)] = parsed_value;
    return j.dump(2) + "\n";
}

void validate_config(const BenchmarkConfig& cfg) {
    if (cfg.b < 2) throw std::invalid_argument("config: b must be >= 2");
    if (cfg.n < cfg.b || cfg.n % cfg.b != 0)
        throw std::invalid_argument("config: n must be a positive multiple of b");
    if (cfg.m_values.empty())
        throw std::invalid_argument("config: m_values must be nonempty");
    for (int m : cfg.m_values)
        if (m < 1 || m > cfg.n)
            throw std::invalid_argument("config: every m must lie in [1, n]");
    if (cfg.p < 1 || cfg.p > cfg.b - 1)
        throw std::invalid_argument("config: p must lie in [1, b-1]");
    if (cfg.bomp_k < 1 || cfg.bomp_k > cfg.b - 1)
        throw std::invalid_argument("config: bomp_k must lie in [1, b-1]");
    if (cfg.k_max < 1 || cfg.k_max > cfg.b)
        throw std::invalid_argument("config: k_max must lie in [1, b]");
    if (cfg.snr_grid_db.empty())
        throw std::invalid_argument("config: snr_grid_db must be nonempty");
    if (cfg.trials_per_cell < 1)
        throw std::invalid_argument("config: trials_per_cell must be positive");
    if (cfg.methods.empty())
        throw std::invalid_argument("config: methods must be nonempty");
    for (const auto& m : cfg.methods)
        if (!method_from_name(m))
            throw std::invalid_argument("config: unrecognized method '" + m + "'");
    if (cfg.snr_mode != "target" && cfg.snr_mode != "physical")
        throw std::invalid_argument("config: snr_mode must be 'target' or 'physical'");
    if (!(cfg.band_stop_hz > cfg.band_start_hz))
        throw std::invalid_argument("config: band_stop_hz must exceed band_start_hz");
    if (cfg.dictionary.tau_step < 1)
        throw std::invalid_argument("config: dictionary.tau_step must be >= 1");
    if (cfg.dictionary.cap < 1)
        throw std::invalid_argument("config: dictionary.cap must be >= 1");
    if (cfg.dictionary.candidates_per_step < 0)
        throw std::invalid_argument("config: dictionary.candidates_per_step must be >= 0");
    if (!(cfg.link_budget.max_distance_m >= cfg.link_budget.min_distance_m))
        throw std::invalid_argument("config: link_budget distance range is empty");
}

rfsim::ChannelPlan channel_plan(const BenchmarkConfig& cfg) {
    rfsim::ChannelPlan plan;
    plan.num_channels = cfg.b;
    plan.bins_per_channel = cfg.n / cfg.b;
    plan.band_start_hz = cfg.band_start_hz;
    plan.band_stop_hz = cfg.band_stop_hz;
    return plan;
}

rfsim::SweepConfig sweep_config(const BenchmarkConfig& cfg) {
    rfsim::SweepConfig sc;
    sc.plan = channel_plan(cfg);
    sc.budget = cfg.link_budget;
    sc.noise = cfg.noise;
    sc.noise.mode = cfg.snr_mode == "target" ? rfsim::SnrMode::target : rfsim::SnrMode::physical;
    sc.methods = cfg.methods;
    sc.m_values = cfg.m_values;
    sc.snr_grid_db = cfg.snr_grid_db;
    sc.trials_per_cell = static_cast<int>(cfg.trials_per_cell);
    sc.k_max = cfg.k_max;
    sc.lmp_p = cfg.p;
    sc.bomp_iters = cfg.bomp_k;
    return sc;
}

}  // namespace lmp

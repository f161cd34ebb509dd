#include "nfisac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nfisac {

double SystemConfig::noise_user_var(std::size_t k) const {
    return std::pow(10.0, noise_user_db.at(k) / 10.0);
}

double SystemConfig::noise_sense_var() const {
    return std::pow(10.0, noise_sense_db / 10.0);
}

void SystemConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw InvalidSpecError(msg); };
    if (!(f_ghz > 0.0)) fail("f_ghz must be positive");
    if (n_tx < 2 || n_rx < 2) fail("both BS arrays need at least 2 elements");
    if (n_users < 1) fail("at least one user required");
    const auto n = static_cast<std::size_t>(n_users);
    if (n_ma.size() != n) fail("nk must have one entry per user");
    if (weights.size() != n) fail("weights must have one entry per user");
    if (noise_user_db.size() != n) fail("noise_user_db must have one entry per user");
    if (user_centers.size() != n) fail("a region center o_u_<k> is required for every user");
    if (region_side_m.size() != n) fail("a_m must have one entry per user");
    for (int v : n_ma) {
        if (v < 1) fail("each user needs at least one antenna");
    }
    for (double w : weights) {
        if (w < 0.0) fail("rate weights must be nonnegative");
    }
    for (double a : region_side_m) {
        if (!(a > 0.0)) fail("region sides must be positive");
    }
    if (!(p_max_w > 0.0)) fail("pmax_w must be positive");
    if (!(d_min_m > 0.0)) fail("dmin_m must be positive");
    if (gamma0 < 0.0) fail("gamma0 must be nonnegative");
    if (eta < 0.0) fail("eta must be nonnegative");
    if (!(tx_length_m > 0.0) || !(rx_length_m > 0.0)) fail("array lengths must be positive");
    if (bs_tx_center.z != 0.0 || bs_rx_center.z != 0.0) fail("BS arrays lie in the z = 0 plane");
    if (!(pgm.initial_step > 0.0)) fail("pgm_mu0 must be positive");
    if (!(pgm.shrink > 0.0) || !(pgm.shrink < 1.0)) fail("pgm_tau must lie in (0, 1)");
    if (!(pgm.sufficient_increase > 0.0)) fail("pgm_delta must be positive");
    if (solver.max_iterations < 1) fail("max_iterations must be positive");
    if (!(solver.wsr_rel_tol > 0.0)) fail("wsr_rel_tol must be positive");
}

AntennaLayout SystemConfig::layout() const {
    AntennaLayout out;
    out.tx = build_ula({tx_length_m, n_tx}, bs_tx_center.x, bs_tx_center.y);
    out.rx = build_ula({rx_length_m, n_rx}, bs_rx_center.x, bs_rx_center.y);
    out.regions.reserve(user_centers.size());
    for (std::size_t k = 0; k < user_centers.size(); ++k) {
        out.regions.push_back({user_centers[k], region_side_m[k], n_ma[k], d_min_m});
    }
    out.target = target;
    return out;
}

namespace {

struct RawEntry {
    int line;
    std::string value;
};

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

double parse_double(const RawEntry& e) {
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError(e.line, "expected a number, got '" + e.value + "'");
    }
}

int parse_int(const RawEntry& e) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(e.value, &used);
        if (used != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError(e.line, "expected an integer, got '" + e.value + "'");
    }
}

bool parse_bool(const RawEntry& e) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigParseError(e.line, "expected a boolean, got '" + e.value + "'");
}

std::vector<double> parse_double_list(const RawEntry& e) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double({e.line, trim(item)}));
    }
    if (out.empty()) throw ConfigParseError(e.line, "expected a comma-separated list");
    return out;
}

std::vector<int> parse_int_list(const RawEntry& e) {
    std::vector<int> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_int({e.line, trim(item)}));
    }
    if (out.empty()) throw ConfigParseError(e.line, "expected a comma-separated list");
    return out;
}

Point3 parse_point(const RawEntry& e) {
    const auto v = parse_double_list(e);
    if (v.size() != 3) throw ConfigParseError(e.line, "expected an x,y,z triple");
    return {v[0], v[1], v[2]};
}

template <typename T>
std::vector<T> broadcast(std::vector<T> v, std::size_t n, int line, const char* key) {
    if (v.size() == 1) {
        return std::vector<T>(n, v.front());
    }
    if (v.size() != n) {
        throw ConfigParseError(line, std::string(key) + " needs 1 or n_users entries");
    }
    return v;
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
    std::map<std::string, RawEntry> raw;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigParseError(line_no, "expected 'key = value'");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigParseError(line_no, "expected 'key = value'");
        }
        raw[key] = {line_no, value};
    }

    SystemConfig cfg;
    std::set<std::string> seen;
    const auto take = [&](const char* key) -> const RawEntry* {
        const auto it = raw.find(key);
        if (it == raw.end()) return nullptr;
        seen.insert(key);
        return &it->second;
    };

    if (const auto* e = take("f_ghz")) cfg.f_ghz = parse_double(*e);
    if (const auto* e = take("k")) cfg.n_users = parse_int(*e);
    if (const auto* e = take("nt")) cfg.n_tx = parse_int(*e);
    if (const auto* e = take("nr")) cfg.n_rx = parse_int(*e);
    if (cfg.n_users < 1) {
        throw ConfigParseError(raw.count("k") ? raw["k"].line : 0, "k must be at least 1");
    }
    const auto n = static_cast<std::size_t>(cfg.n_users);

    if (const auto* e = take("nk")) {
        cfg.n_ma = broadcast(parse_int_list(*e), n, e->line, "nk");
    } else {
        cfg.n_ma.assign(n, 2);
    }
    if (const auto* e = take("weights")) {
        cfg.weights = broadcast(parse_double_list(*e), n, e->line, "weights");
    } else {
        cfg.weights.assign(n, 1.0 / static_cast<double>(cfg.n_users));
    }
    if (const auto* e = take("a_m")) {
        cfg.region_side_m = broadcast(parse_double_list(*e), n, e->line, "a_m");
    } else {
        cfg.region_side_m.assign(n, 0.2);
    }
    if (const auto* e = take("noise_db")) {
        const double v = parse_double(*e);
        cfg.noise_user_db.assign(n, v);
        cfg.noise_sense_db = v;
    } else {
        cfg.noise_user_db.assign(n, -100.0);
    }
    if (const auto* e = take("noise_user_db")) {
        cfg.noise_user_db = broadcast(parse_double_list(*e), n, e->line, "noise_user_db");
    }
    if (const auto* e = take("noise_sense_db")) cfg.noise_sense_db = parse_double(*e);

    if (const auto* e = take("pmax_w")) cfg.p_max_w = parse_double(*e);
    if (const auto* e = take("gamma0")) {
        cfg.gamma0 = parse_double(*e);
        if (cfg.gamma0 < 0.0) throw ConfigParseError(e->line, "gamma0 must be nonnegative");
    }
    if (const auto* e = take("gamma0_db")) cfg.gamma0 = std::pow(10.0, parse_double(*e) / 10.0);
    if (const auto* e = take("eta")) cfg.eta = parse_double(*e);
    if (const auto* e = take("dmin_m")) {
        cfg.d_min_m = parse_double(*e);
    } else {
        cfg.d_min_m = cfg.wavelength() / 2.0;
    }

    if (const auto* e = take("o_t")) cfg.bs_tx_center = parse_point(*e);
    if (const auto* e = take("o_r")) cfg.bs_rx_center = parse_point(*e);
    if (const auto* e = take("target")) cfg.target = parse_point(*e);
    if (const auto* e = take("lt_m")) cfg.tx_length_m = parse_double(*e);
    if (const auto* e = take("lr_m")) cfg.rx_length_m = parse_double(*e);

    cfg.user_centers.resize(n);
    const std::vector<Point3> default_centers = {{-4.0, 1.5, 15.0}, {2.0, 1.5, 20.0}};
    for (std::size_t k = 0; k < n; ++k) {
        const std::string key = "o_u_" + std::to_string(k + 1);
        if (const auto it = raw.find(key); it != raw.end()) {
            seen.insert(key);
            cfg.user_centers[k] = parse_point(it->second);
        } else if (k < default_centers.size()) {
            cfg.user_centers[k] = default_centers[k];
        } else {
            throw ConfigParseError(0, "missing region center " + key + " for user " +
                                          std::to_string(k + 1));
        }
    }

    if (const auto* e = take("pgm_mu0")) cfg.pgm.initial_step = parse_double(*e);
    if (const auto* e = take("pgm_tau")) cfg.pgm.shrink = parse_double(*e);
    if (const auto* e = take("pgm_delta")) cfg.pgm.sufficient_increase = parse_double(*e);
    if (const auto* e = take("pgm_max_backtracks")) cfg.pgm.max_backtracks = parse_int(*e);
    if (const auto* e = take("pgm_min_step")) cfg.pgm.min_step = parse_double(*e);

    if (const auto* e = take("max_iterations")) cfg.solver.max_iterations = parse_int(*e);
    if (const auto* e = take("wsr_rel_tol")) cfg.solver.wsr_rel_tol = parse_double(*e);
    if (const auto* e = take("sca_max_inner")) cfg.solver.sca_max_inner = parse_int(*e);
    if (const auto* e = take("v_max_inner")) cfg.solver.v_max_inner = parse_int(*e);
    if (const auto* e = take("pgm_max_inner")) cfg.solver.pgm_max_inner = parse_int(*e);
    if (const auto* e = take("block_exit_factor")) cfg.solver.block_exit_factor = parse_double(*e);
    if (const auto* e = take("pgm_reset_step")) cfg.solver.pgm_reset_step = parse_bool(*e);
    if (const auto* e = take("dual_rel_tol")) cfg.solver.dual_rel_tol = parse_double(*e);
    if (const auto* e = take("dual_max_iterations")) cfg.solver.dual_max_iterations = parse_int(*e);
    if (const auto* e = take("v_solver_max_iterations"))
        cfg.solver.v_solver_max_iterations = parse_int(*e);
    if (const auto* e = take("v_solver_residual_tol"))
        cfg.solver.v_solver_residual_tol = parse_double(*e);
    if (const auto* e = take("dykstra_tol")) cfg.solver.dykstra_tol = parse_double(*e);

    for (const auto& [key, entry] : raw) {
        if (!seen.count(key)) {
            throw ConfigParseError(entry.line, "unknown key '" + key + "'");
        }
    }

    cfg.validate();
    return cfg;
}

SystemConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace nfisac

// run_config.hpp — flat key = value configuration for the qworkscope CLI.
// UTF-8 text, one `key = value` per line, `#` starts a comment; command-line
// flags override file values.

#pragma once

#include "qws/two_level.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace qws {

struct RunConfig {
    double nu0 = 1.0;
    double nu_t = 1.8;
    double t_prime = 1.0;
    std::vector<double> t_prime_list;  // used by `sweep`; defaults to the Fig 3 grid
    double beta = 0.01;
    double sigma = 1.0;
    StateKind state = StateKind::CoherentGibbs;
    double propagation_tol = 1e-9;
    int oracle_cutoff = 0;  // 0 = cutoff rule
    double w_min = -10.0;
    double w_max = 10.0;
    int w_points = 2001;
    std::string out_path;  // empty = stdout

    SpinParams spin_params() const { return SpinParams{nu0, nu_t, t_prime, beta, sigma}; }

    void validate() const {
        spin_params().validate();
        if (!(propagation_tol > 0.0)) {
            throw std::invalid_argument("config: tol must be > 0");
        }
        if (oracle_cutoff < 0) {
            throw std::invalid_argument("config: cutoff must be >= 0 (0 = automatic rule)");
        }
        if (!(w_min < w_max) || w_points < 2) {
            throw std::invalid_argument("config: need w_min < w_max and w_points >= 2");
        }
        for (double tp : t_prime_list) {
            if (!(tp > 0.0)) {
                throw std::invalid_argument("config: t_prime_list entries must be > 0");
            }
        }
    }

    // 61-point logarithmic grid over [0.01, 100]/nu0, the Fig 3 sweep.
    std::vector<double> effective_t_prime_list() const {
        if (!t_prime_list.empty()) return t_prime_list;
        std::vector<double> grid;
        grid.reserve(61);
        for (int k = 0; k < 61; ++k) {
            grid.push_back(std::pow(10.0, -2.0 + 4.0 * k / 60.0) / nu0);
        }
        return grid;
    }

    std::string echo() const {
        std::ostringstream s;
        s << "nu0=" << nu0 << " nu_t=" << nu_t << " t_prime=" << t_prime;
        if (!t_prime_list.empty()) {
            s << " t_prime_list=";
            for (std::size_t i = 0; i < t_prime_list.size(); ++i) {
                s << (i ? ";" : "") << t_prime_list[i];
            }
        }
        s << " beta=" << beta << " sigma=" << sigma << " state=" << state_kind_name(state)
          << " tol=" << propagation_tol << " cutoff=" << oracle_cutoff << " w_min=" << w_min
          << " w_max=" << w_max << " w_points=" << w_points;
        return s.str();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: field '" + key + "': cannot parse number '" + text + "'");
    }
}

inline std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        out.push_back(parse_number(key, token));
    }
    if (out.empty()) {
        throw std::invalid_argument("config: field '" + key + "' has no values");
    }
    return out;
}

}  // namespace detail

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "nu0") cfg.nu0 = detail::parse_number(key, value);
    else if (key == "nu_t") cfg.nu_t = detail::parse_number(key, value);
    else if (key == "t_prime") cfg.t_prime = detail::parse_number(key, value);
    else if (key == "t_prime_list") cfg.t_prime_list = detail::parse_number_list(key, value);
    else if (key == "beta") cfg.beta = detail::parse_number(key, value);
    else if (key == "sigma") cfg.sigma = detail::parse_number(key, value);
    else if (key == "state") cfg.state = parse_state_kind(value);
    else if (key == "tol") cfg.propagation_tol = detail::parse_number(key, value);
    else if (key == "cutoff") cfg.oracle_cutoff = static_cast<int>(detail::parse_number(key, value));
    else if (key == "w_min") cfg.w_min = detail::parse_number(key, value);
    else if (key == "w_max") cfg.w_max = detail::parse_number(key, value);
    else if (key == "w_points") cfg.w_points = static_cast<int>(detail::parse_number(key, value));
    else if (key == "out") cfg.out_path = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open file '" + path + "'");
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config: " << path << ":" << line_no << ": expected 'key = value'";
            throw std::invalid_argument(msg.str());
        }
        apply_config_entry(cfg, detail::trim(trimmed.substr(0, eq)),
                           detail::trim(trimmed.substr(eq + 1)));
    }
}

}  // namespace qws

// config_io.hpp - flat key=value sweep configuration files and BER CSV output.
//
// Config format: one `key = value` per line, `#` starts a comment, blank
// lines ignored. Keys:
//   scheme, N, G, M, c2_set, c1_rule, P, d_max, alpha_max, L_cp, detector,
//   snr_db_list, seed, stop.min_errors, stop.max_frames
// c2_set is `half-pi` or a comma list; c1_rule is `full-diversity` or a
// number; L_cp is `auto` (= d_max) or an integer; snr_db_list is a comma list.

#pragma once

#include "afdm_pim/sim.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace afdm_pim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_double(v[i]);
    return out;
}

inline double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).size()) throw std::invalid_argument("trailing characters");
    return v;
}

inline std::uint64_t parse_uint(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument("not an unsigned integer");
    return std::stoull(s);
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) v.push_back(parse_double(trim(item)));
    return v;
}

}  // namespace detail

inline std::string format_config(const SweepConfig& c) {
    std::ostringstream os;
    os << "scheme = " << to_string(c.scheme) << "\n"
       << "N = " << c.N << "\n"
       << "G = " << c.G << "\n"
       << "M = " << c.M << "\n"
       << "c2_set = " << (c.c2_set.empty() ? "half-pi" : detail::join_doubles(c.c2_set)) << "\n"
       << "c1_rule = " << (c.c1_rule == C1Rule::FullDiversity ? "full-diversity" : detail::fmt_double(c.c1_value)) << "\n"
       << "P = " << c.channel.paths << "\n"
       << "d_max = " << c.channel.d_max << "\n"
       << "alpha_max = " << c.channel.alpha_max << "\n"
       << "L_cp = " << (c.cp_len ? std::to_string(*c.cp_len) : "auto") << "\n"
       << "detector = " << to_string(c.detector) << "\n"
       << "snr_db_list = " << detail::join_doubles(c.snr_db) << "\n"
       << "seed = " << c.seed << "\n"
       << "stop.min_errors = " << c.stop.min_errors << "\n"
       << "stop.max_frames = " << c.stop.max_frames << "\n";
    return os.str();
}

/// Parse a config; unspecified keys keep the values of `base`. The result is
/// validated. Errors carry the offending line number.
inline SweepConfig parse_config(std::istream& in, const std::string& source = "<config>", SweepConfig base = {}) {
    SweepConfig c = std::move(base);
    std::map<std::string, int> seen;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = source + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (seen.count(key)) throw ConfigError(where + "duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
        seen[key] = lineno;
        try {
            if (key == "scheme") c.scheme = scheme_from_string(val);
            else if (key == "N") c.N = detail::parse_uint(val);
            else if (key == "G") c.G = detail::parse_uint(val);
            else if (key == "M") c.M = static_cast<unsigned>(detail::parse_uint(val));
            else if (key == "c2_set") c.c2_set = val == "half-pi" ? std::vector<double>{} : detail::parse_double_list(val);
            else if (key == "c1_rule") {
                if (val == "full-diversity") c.c1_rule = C1Rule::FullDiversity;
                else c.c1_rule = C1Rule::Fixed, c.c1_value = detail::parse_double(val);
            }
            else if (key == "P") c.channel.paths = static_cast<unsigned>(detail::parse_uint(val));
            else if (key == "d_max") c.channel.d_max = static_cast<unsigned>(detail::parse_uint(val));
            else if (key == "alpha_max") c.channel.alpha_max = static_cast<int>(detail::parse_uint(val));
            else if (key == "L_cp") c.cp_len = val == "auto" ? std::nullopt : std::optional<std::size_t>(detail::parse_uint(val));
            else if (key == "detector") c.detector = detector_from_string(val);
            else if (key == "snr_db_list") c.snr_db = detail::parse_double_list(val);
            else if (key == "seed") c.seed = detail::parse_uint(val);
            else if (key == "stop.min_errors") c.stop.min_errors = detail::parse_uint(val);
            else if (key == "stop.max_frames") c.stop.max_frames = detail::parse_uint(val);
            else throw ConfigError(where + "unknown key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(where + "bad value '" + val + "' for " + key + ": " + e.what());
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return c;
}

inline SweepConfig load_config(const std::string& path, SweepConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path, std::move(base));
}

inline void save_config(const SweepConfig& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_config(c);
}

inline constexpr const char* kCsvHeader = "scheme,detector,snr_db,frames,bit_errors,total_bits,ber,seed,wall_time_s";

/// CSV text of the records. With include_timing = false the wall-time column
/// is written as 0 so repeated runs produce identical bytes.
inline std::string format_csv(const std::vector<BerRecord>& recs, bool include_timing = true) {
    std::string out = std::string(kCsvHeader) + "\n";
    char buf[256];
    for (const auto& r : recs) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.6g,%llu,%llu,%llu,%.10e,%llu,%.3f\n", r.scheme.c_str(), r.detector.c_str(),
                      r.snr_db, static_cast<unsigned long long>(r.frames), static_cast<unsigned long long>(r.bit_errors),
                      static_cast<unsigned long long>(r.total_bits), r.ber, static_cast<unsigned long long>(r.seed),
                      include_timing ? r.wall_time_s : 0.0);
        out += buf;
    }
    return out;
}

inline void write_csv(const std::vector<BerRecord>& recs, const std::string& path, bool include_timing = true) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_csv(recs, include_timing);
}

}  // namespace afdm_pim

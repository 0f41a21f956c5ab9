#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nbrange/anm.hpp"
#include "nbrange/channel.hpp"
#include "nbrange/common.hpp"
#include "nbrange/music.hpp"
#include "nbrange/nn.hpp"

namespace nbrange {

/// `key = value` lines, '#' comments, blank lines ignored.
struct KeyValueFile {
    std::map<std::string, std::string> values;

    static KeyValueFile parse(std::istream& in) {
        KeyValueFile kv;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string t = trim(line);
            if (t.empty()) continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty()) throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
            kv.values[key] = val;
        }
        return kv;
    }

    static KeyValueFile parse_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open config file " + path);
        return parse(f);
    }

    bool has(const std::string& key) const { return values.count(key) != 0; }

    double get_double(const std::string& key, double fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        if (it->second == "inf" || it->second == "+inf") return std::numeric_limits<double>::infinity();
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::runtime_error("config key '" + key + "': bad number");
        return v;
    }

    long long get_int(const std::string& key, long long fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        size_t used = 0;
        const long long v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::runtime_error("config key '" + key + "': bad integer");
        return v;
    }

    uint64_t get_u64(const std::string& key, uint64_t fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        return std::stoull(it->second);
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
};

enum class Method { full, zero_pad, mps, wps, anm, nn };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::full: return "full";
    case Method::zero_pad: return "zero_pad";
    case Method::mps: return "mps";
    case Method::wps: return "wps";
    case Method::anm: return "anm";
    case Method::nn: return "nn";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    for (Method m : {Method::full, Method::zero_pad, Method::mps, Method::wps, Method::anm, Method::nn})
        if (s == method_name(m)) return m;
    throw std::runtime_error("unknown estimation method: " + s);
}

inline std::vector<Method> parse_method_list(const std::string& csv) {
    std::vector<Method> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos) continue;
        out.push_back(parse_method(item.substr(a, b - a + 1)));
    }
    if (out.empty()) throw std::runtime_error("empty method list");
    return out;
}

/// "0:2,24:26,78" -> blocks; single indices allowed.
inline std::vector<GapBlock> parse_blocks(const std::string& csv, bool interfered) {
    std::vector<GapBlock> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t;
        for (char c : item)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) continue;
        const auto colon = t.find(':');
        GapBlock b;
        b.interfered = interfered;
        if (colon == std::string::npos) {
            b.first = b.last = std::stoi(t);
        } else {
            b.first = std::stoi(t.substr(0, colon));
            b.last = std::stoi(t.substr(colon + 1));
        }
        out.push_back(b);
    }
    return out;
}

struct ExperimentConfig {
    ToneGrid grid;           // defaults: 2.401 GHz, 1 MHz, 80 tones
    SVParams sv;             // tau0 derived from distance_m
    double distance_m = 6.0;
    double snr_db = 20.0;
    double sir_db = 0.0;
    std::string preset = "gap1"; // "none" for gap-free, "custom" with explicit blocks
    GapMap gaps = gap_preset(1);
    std::vector<Method> methods{Method::full, Method::zero_pad, Method::mps, Method::wps};
    int realizations = 500;
    uint64_t seed = 1;
    MusicConfig music;
    AnmConfig anm;
    std::string bank_path;
    int threads = 0;

    double tau0_s() const { return distance_m / kSpeedOfLight; }

    void validate() const {
        grid.validate();
        if (realizations < 1) throw std::invalid_argument("ExperimentConfig: realizations must be >= 1");
        if (distance_m <= 0.0) throw std::invalid_argument("ExperimentConfig: distance must be positive");
        gaps.validate(grid.num_tones);
    }
};

/// Known configuration keys; anything else in a config file is rejected so
/// typos do not silently fall back to defaults.
inline const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "f0_hz", "delta_f_hz", "num_tones",
        "distance_m", "snr_db", "sir_db",
        "ray_rate_inv_ns", "rician_db", "rms_delay_spread_ns", "max_paths",
        "preset", "missing", "interfered",
        "modes", "realizations", "seed", "threads", "bank",
        "tau_min_ns", "tau_max_ns", "tau_step_ns",
        "eig_threshold_ratio", "peak_prominence_ratio", "min_band_tones",
        "anm_rho", "anm_max_iter", "anm_eps_abs", "anm_eps_rel",
        "train_widths", "hidden_neurons", "train_samples", "val_samples",
        "epochs", "batch_size", "learning_rate",
        "train_snr_db_min", "train_snr_db_max", "train_tau0_ns_min", "train_tau0_ns_max",
        "train_ray_rate_inv_ns_min", "train_ray_rate_inv_ns_max",
        "train_rician_db_min", "train_rician_db_max", "train_edge_models",
    };
    return keys;
}

inline ExperimentConfig experiment_config_from(const KeyValueFile& kv) {
    for (const auto& [key, value] : kv.values) {
        (void)value;
        if (!known_config_keys().count(key)) throw std::runtime_error("unknown config key: " + key);
    }

    ExperimentConfig cfg;
    cfg.grid.f0_hz = kv.get_double("f0_hz", cfg.grid.f0_hz);
    cfg.grid.delta_f_hz = kv.get_double("delta_f_hz", cfg.grid.delta_f_hz);
    cfg.grid.num_tones = static_cast<int>(kv.get_int("num_tones", cfg.grid.num_tones));
    cfg.distance_m = kv.get_double("distance_m", cfg.distance_m);
    cfg.snr_db = kv.get_double("snr_db", cfg.snr_db);
    cfg.sir_db = kv.get_double("sir_db", cfg.sir_db);
    cfg.sv.ray_rate_inv_s = kv.get_double("ray_rate_inv_ns", cfg.sv.ray_rate_inv_s * 1e9) * 1e-9;
    cfg.sv.rician_db = kv.get_double("rician_db", cfg.sv.rician_db);
    cfg.sv.rms_delay_spread_s = kv.get_double("rms_delay_spread_ns", cfg.sv.rms_delay_spread_s * 1e9) * 1e-9;
    cfg.sv.max_paths = static_cast<int>(kv.get_int("max_paths", cfg.sv.max_paths));

    cfg.preset = kv.get_string("preset", cfg.preset);
    if (cfg.preset == "none") {
        cfg.gaps = GapMap{};
    } else if (cfg.preset != "custom") {
        cfg.gaps = gap_preset(cfg.preset);
    } else {
        cfg.gaps = GapMap{};
    }
    if (kv.has("missing") || kv.has("interfered")) {
        if (cfg.preset != "custom")
            throw std::runtime_error("explicit gap blocks require preset = custom");
        for (const auto& b : parse_blocks(kv.get_string("missing", ""), false)) cfg.gaps.blocks.push_back(b);
        for (const auto& b : parse_blocks(kv.get_string("interfered", ""), true)) cfg.gaps.blocks.push_back(b);
    }

    if (kv.has("modes")) cfg.methods = parse_method_list(kv.get_string("modes", ""));
    cfg.realizations = static_cast<int>(kv.get_int("realizations", cfg.realizations));
    cfg.seed = kv.get_u64("seed", cfg.seed);
    cfg.threads = static_cast<int>(kv.get_int("threads", cfg.threads));
    cfg.bank_path = kv.get_string("bank", cfg.bank_path);

    cfg.music.tau_min_s = kv.get_double("tau_min_ns", cfg.music.tau_min_s * 1e9) * 1e-9;
    cfg.music.tau_max_s = kv.get_double("tau_max_ns", cfg.music.tau_max_s * 1e9) * 1e-9;
    cfg.music.tau_step_s = kv.get_double("tau_step_ns", cfg.music.tau_step_s * 1e9) * 1e-9;
    cfg.music.eig_threshold_ratio = kv.get_double("eig_threshold_ratio", cfg.music.eig_threshold_ratio);
    cfg.music.peak_prominence_ratio = kv.get_double("peak_prominence_ratio", cfg.music.peak_prominence_ratio);
    cfg.music.min_band_tones = static_cast<int>(kv.get_int("min_band_tones", cfg.music.min_band_tones));

    cfg.anm.rho = kv.get_double("anm_rho", cfg.anm.rho);
    cfg.anm.max_iter = static_cast<int>(kv.get_int("anm_max_iter", cfg.anm.max_iter));
    cfg.anm.eps_abs = kv.get_double("anm_eps_abs", cfg.anm.eps_abs);
    cfg.anm.eps_rel = kv.get_double("anm_eps_rel", cfg.anm.eps_rel);

    cfg.validate();
    return cfg;
}

/// Training configuration from the same key-value schema.
inline TrainConfig train_config_from(const KeyValueFile& kv) {
    for (const auto& [key, value] : kv.values) {
        (void)value;
        if (!known_config_keys().count(key)) throw std::runtime_error("unknown config key: " + key);
    }
    TrainConfig cfg;
    cfg.grid.f0_hz = kv.get_double("f0_hz", cfg.grid.f0_hz);
    cfg.grid.delta_f_hz = kv.get_double("delta_f_hz", cfg.grid.delta_f_hz);
    cfg.grid.num_tones = static_cast<int>(kv.get_int("num_tones", cfg.grid.num_tones));
    cfg.max_gap_width = static_cast<int>(kv.get_int("train_widths", cfg.max_gap_width));
    cfg.hidden_dim = static_cast<int>(kv.get_int("hidden_neurons", cfg.hidden_dim));
    cfg.train_samples = static_cast<size_t>(kv.get_int("train_samples", static_cast<long long>(cfg.train_samples)));
    cfg.val_samples = static_cast<size_t>(kv.get_int("val_samples", static_cast<long long>(cfg.val_samples)));
    cfg.epochs = static_cast<int>(kv.get_int("epochs", cfg.epochs));
    cfg.batch_size = static_cast<int>(kv.get_int("batch_size", cfg.batch_size));
    cfg.learning_rate = kv.get_double("learning_rate", cfg.learning_rate);
    cfg.snr_db_min = kv.get_double("train_snr_db_min", cfg.snr_db_min);
    cfg.snr_db_max = kv.get_double("train_snr_db_max", cfg.snr_db_max);
    cfg.tau0_ns_min = kv.get_double("train_tau0_ns_min", cfg.tau0_ns_min);
    cfg.tau0_ns_max = kv.get_double("train_tau0_ns_max", cfg.tau0_ns_max);
    cfg.ray_rate_inv_ns_min = kv.get_double("train_ray_rate_inv_ns_min", cfg.ray_rate_inv_ns_min);
    cfg.ray_rate_inv_ns_max = kv.get_double("train_ray_rate_inv_ns_max", cfg.ray_rate_inv_ns_max);
    cfg.rician_db_min = kv.get_double("train_rician_db_min", cfg.rician_db_min);
    cfg.rician_db_max = kv.get_double("train_rician_db_max", cfg.rician_db_max);
    cfg.rms_delay_spread_ns = kv.get_double("rms_delay_spread_ns", cfg.rms_delay_spread_ns);
    cfg.max_paths = static_cast<int>(kv.get_int("max_paths", cfg.max_paths));
    cfg.train_edge_models = kv.get_int("train_edge_models", cfg.train_edge_models ? 1 : 0) != 0;
    cfg.threads = static_cast<int>(kv.get_int("threads", cfg.threads));
    cfg.validate();
    return cfg;
}

} // namespace nbrange

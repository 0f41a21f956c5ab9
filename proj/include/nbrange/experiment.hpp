#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "nbrange/anm.hpp"
#include "nbrange/capture_io.hpp"
#include "nbrange/config.hpp"
#include "nbrange/metrics.hpp"
#include "nbrange/music.hpp"
#include "nbrange/parallel.hpp"
#include "nbrange/schedule.hpp"

namespace nbrange {

struct RunRecord {
    Method method = Method::full;
    int realization = 0;
    double truth_m = 0.0;
    double estimate_m = 0.0; // NaN when failed
    double error_m = 0.0;    // NaN when failed
    bool failed = false;
};

struct MetricsReport {
    std::vector<RunRecord> records; // realization-major, then config method order
    std::map<Method, ErrorStats> stats;
    std::map<Method, std::vector<std::pair<double, double>>> cdf;

    const ErrorStats& stats_for(Method m) const {
        auto it = stats.find(m);
        if (it == stats.end()) throw std::invalid_argument("MetricsReport: method not in report");
        return it->second;
    }
};

namespace detail {

/// One realization of the benchmark pipeline: channel, captures with and
/// without gaps, and per-method estimates.
inline void run_realization(const ExperimentConfig& cfg, const NNBank* bank, int r,
                            std::vector<RunRecord>& out_records) {
    const uint64_t rseed = cfg.seed + static_cast<uint64_t>(r);
    SVParams sv = cfg.sv;
    sv.tau0_s = cfg.tau0_s();
    const auto ch = sample_sv_channel(sv, mix_seed(rseed, 11));
    const auto cap_clean = synthesize_iq(ch, cfg.grid, cfg.snr_db, mix_seed(rseed, 22));
    const auto cap = cfg.gaps.empty() ? cap_clean : apply_gap_map(cap_clean, cfg.gaps, cfg.sir_db, mix_seed(rseed, 33));
    const double truth_m = kSpeedOfLight * sv.tau0_s;

    for (size_t m = 0; m < cfg.methods.size(); ++m) {
        const Method method = cfg.methods[m];
        RunRecord rec;
        rec.method = method;
        rec.realization = r;
        rec.truth_m = truth_m;
        try {
            RangeEstimate est;
            switch (method) {
            case Method::full:
                est = estimate_range(cap_clean, EstimatorMode::full, cfg.music);
                break;
            case Method::zero_pad:
                est = estimate_range(cap, EstimatorMode::zero_pad, cfg.music);
                break;
            case Method::mps:
                est = estimate_range(cap, EstimatorMode::mps, cfg.music);
                break;
            case Method::wps:
                est = estimate_range(cap, EstimatorMode::wps, cfg.music);
                break;
            case Method::anm: {
                const auto resp = two_way(cap);
                AnmProblem prob;
                prob.K = cfg.grid.num_tones;
                for (int k = 0; k < prob.K; ++k) {
                    if (!resp.available[k]) continue;
                    prob.omega.push_back(k);
                    prob.observed.push_back(resp.h_sq[k]);
                }
                const auto sol = recover_anm(prob, cfg.anm);
                TwoWayResponse full = resp;
                full.h_sq = sol.h_sq_full;
                full.available.assign(prob.K, 1);
                est = estimate_range_from_hsq(full, cfg.music);
                break;
            }
            case Method::nn: {
                if (!bank) throw EstimationError("nn method requires a model bank");
                const auto rec_result = recover_gaps(two_way(cap), cfg.gaps, *bank);
                if (!rec_result.unrecovered.empty())
                    throw EstimationError("nn recovery left gaps unfilled");
                est = estimate_range_from_hsq(rec_result.response, cfg.music);
                break;
            }
            }
            rec.estimate_m = est.distance_m;
            rec.error_m = est.distance_m - truth_m;
        } catch (const EstimationError&) {
            rec.failed = true;
            rec.estimate_m = std::numeric_limits<double>::quiet_NaN();
            rec.error_m = std::numeric_limits<double>::quiet_NaN();
        }
        out_records[static_cast<size_t>(r) * cfg.methods.size() + m] = rec;
    }
}

} // namespace detail

/// Monte-Carlo benchmark: realizations run in parallel on per-realization
/// seed streams (seed + index); records land in fixed slots so the report is
/// bit-identical regardless of the thread count.
inline MetricsReport run_experiment(const ExperimentConfig& cfg, const NNBank* bank = nullptr) {
    cfg.validate();
    for (Method m : cfg.methods)
        if (m == Method::nn && !bank) throw std::invalid_argument("run_experiment: nn method without a bank");

    MetricsReport report;
    report.records.resize(static_cast<size_t>(cfg.realizations) * cfg.methods.size());
    parallel_for(static_cast<size_t>(cfg.realizations), cfg.threads,
                 [&](size_t r) { detail::run_realization(cfg, bank, static_cast<int>(r), report.records); });

    for (Method m : cfg.methods) {
        std::vector<double> signed_errors;
        std::vector<double> abs_errors;
        size_t failures = 0;
        for (const auto& rec : report.records) {
            if (rec.method != m) continue;
            if (rec.failed) {
                ++failures;
                continue;
            }
            signed_errors.push_back(rec.error_m);
            abs_errors.push_back(std::abs(rec.error_m));
        }
        report.stats[m] = error_stats(std::move(signed_errors), failures);
        report.cdf[m] = error_cdf(std::move(abs_errors));
    }
    return report;
}

struct SweepRow {
    double factor = 0.0; // fraction of the band length
    int smoothing = 0;   // floor(factor * K) + 1
    ErrorStats stats;
};

/// Smoothing-factor sweep on the gap-free pipeline: reruns the benchmark with
/// L = floor(F * K) + 1 forced, one row per F.
inline std::vector<SweepRow> sweep_smoothing(const ExperimentConfig& base, const std::vector<double>& factors) {
    ExperimentConfig cfg = base;
    cfg.gaps = GapMap{};
    cfg.preset = "none";
    cfg.methods = {Method::full};
    std::vector<SweepRow> rows;
    for (double f : factors) {
        if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("sweep_smoothing: factors must lie in (0, 1)");
        SweepRow row;
        row.factor = f;
        row.smoothing = static_cast<int>(f * cfg.grid.num_tones) + 1;
        cfg.music.smoothing_override = row.smoothing;
        row.stats = run_experiment(cfg).stats_for(Method::full);
        rows.push_back(row);
    }
    return rows;
}

/// Runs the estimation pipeline on a capture file. Methods anm and nn first
/// complete the masked tones (nn needs a bank path).
inline RangeEstimate process_capture_file(const std::string& path, Method method, const MusicConfig& music,
                                          const AnmConfig& anm = {}, const std::string& bank_path = {}) {
    const IQCapture cap = read_capture_file(path);
    switch (method) {
    case Method::full:
        return estimate_range(cap, EstimatorMode::full, music);
    case Method::zero_pad:
        return estimate_range(cap, EstimatorMode::zero_pad, music);
    case Method::mps:
        return estimate_range(cap, EstimatorMode::mps, music);
    case Method::wps:
        return estimate_range(cap, EstimatorMode::wps, music);
    case Method::anm: {
        const auto resp = two_way(cap);
        AnmProblem prob;
        prob.K = cap.grid.num_tones;
        for (int k = 0; k < prob.K; ++k) {
            if (!resp.available[k]) continue;
            prob.omega.push_back(k);
            prob.observed.push_back(resp.h_sq[k]);
        }
        if (prob.omega.empty()) throw EstimationError("capture has no available tones");
        const auto sol = recover_anm(prob, anm);
        TwoWayResponse full = resp;
        full.h_sq = sol.h_sq_full;
        full.available.assign(prob.K, 1);
        return estimate_range_from_hsq(full, music);
    }
    case Method::nn: {
        if (bank_path.empty()) throw std::invalid_argument("nn method requires --bank");
        const NNBank bank = load_bank(bank_path);
        const auto resp = two_way(cap);
        // the gap map is implied by the capture's masks
        GapMap gaps;
        int k = 0;
        const int k_count = cap.grid.num_tones;
        bool any_available = false;
        for (int i = 0; i < k_count; ++i) any_available |= (cap.available[i] != 0);
        if (!any_available) throw EstimationError("capture has no available tones");
        while (k < k_count) {
            if (cap.available[k]) {
                ++k;
                continue;
            }
            const int start = k;
            bool interfered = cap.interfered[k];
            while (k < k_count && !cap.available[k]) {
                interfered = interfered || cap.interfered[k];
                ++k;
            }
            gaps.blocks.push_back({start, k - 1, interfered});
        }
        const auto rec = recover_gaps(resp, gaps, bank);
        if (!rec.unrecovered.empty()) throw EstimationError("bank cannot recover all gaps in the capture");
        return estimate_range_from_hsq(rec.response, music);
    }
    }
    throw std::invalid_argument("process_capture_file: bad method");
}

// ---------------------------------------------------------------------------
// Report output: per-run CSV, plain-text summary, per-method CDF CSV.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

inline void write_runs_csv(std::ostream& out, const MetricsReport& report) {
    out << "mode,realization,truth_m,estimate_m,error_m\n";
    for (const auto& rec : report.records) {
        out << method_name(rec.method) << ',' << rec.realization << ',' << detail::fmt_double(rec.truth_m) << ','
            << detail::fmt_double(rec.estimate_m) << ',' << detail::fmt_double(rec.error_m) << '\n';
    }
}

inline void write_summary(std::ostream& out, const MetricsReport& report, const std::vector<Method>& order) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-10s %8s %8s %12s %12s %12s\n", "mode", "runs", "failed", "rmse_m",
                  "median_m", "q90_m");
    out << buf;
    for (Method m : order) {
        const auto& st = report.stats_for(m);
        std::snprintf(buf, sizeof(buf), "%-10s %8zu %8zu %12.6f %12.6f %12.6f\n", method_name(m), st.successes,
                      st.failures, st.rmse_m, st.median_m, st.q90_m);
        out << buf;
    }
}

inline void write_cdf_csv(std::ostream& out, const std::vector<std::pair<double, double>>& cdf) {
    out << "error_m,prob\n";
    for (const auto& [e, p] : cdf) out << detail::fmt_double(e) << ',' << detail::fmt_double(p) << '\n';
}

inline void write_report_files(const std::string& out_dir, const ExperimentConfig& cfg, const MetricsReport& report) {
    {
        std::ofstream f(out_dir + "/runs.csv");
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/runs.csv");
        write_runs_csv(f, report);
    }
    {
        std::ofstream f(out_dir + "/summary.txt");
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/summary.txt");
        write_summary(f, report, cfg.methods);
    }
    for (Method m : cfg.methods) {
        std::ofstream f(out_dir + "/cdf_" + method_name(m) + ".csv");
        if (!f) throw std::runtime_error("cannot write cdf file");
        write_cdf_csv(f, report.cdf.at(m));
    }
}

} // namespace nbrange

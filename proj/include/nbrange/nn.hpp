#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "nbrange/channel.hpp"
#include "nbrange/common.hpp"
#include "nbrange/parallel.hpp"
#include "nbrange/reconstruct.hpp"
#include "nbrange/rng.hpp"

namespace nbrange {

/// One-hidden-layer real network filling a width-W tone gap in h^2.
///
/// Interior models read W tones on each side of the gap; edge models read 2W
/// tones on one side (canonical orientation: context immediately BEFORE the
/// gap; callers mirror left-edge gaps through reverse+conjugate). Both take
/// 4W standardized features to 2W outputs, so the stored parameter count per
/// model is 6HW + (H + 2W) weights/biases plus 12W normalization constants.
struct NNModel {
    int gap_width = 0;  // W
    int hidden_dim = 0; // H
    bool edge = false;

    std::vector<double> weights_in;  // H x 4W, row-major
    std::vector<double> bias_hidden; // H
    std::vector<double> weights_out; // 2W x H, row-major
    std::vector<double> bias_out;    // 2W
    std::vector<double> in_mean, in_std;   // 4W
    std::vector<double> out_mean, out_std; // 2W

    int input_dim() const { return 4 * gap_width; }
    int output_dim() const { return 2 * gap_width; }

    size_t param_count() const {
        return weights_in.size() + bias_hidden.size() + weights_out.size() + bias_out.size() + in_mean.size() +
               in_std.size() + out_mean.size() + out_std.size();
    }
};

/// Flops of one forward pass: 6WH+6W multiplications and as many additions.
inline uint64_t forward_flops(int W, int H) { return 12ull * W * H + 12ull * W; }

/// Stored real values for a bank of widths 1..T with hidden size H.
inline size_t bank_param_count(int T, int H) {
    if (T < 1 || H < 1) throw std::invalid_argument("bank_param_count: T and H must be positive");
    size_t total = 0;
    for (int i = 1; i <= T; ++i) total += 6ull * H * i + (H + 2ull * i) + 12ull * i;
    return total;
}

namespace detail {

inline std::vector<double> nn_raw_forward(const NNModel& m, const std::vector<double>& x) {
    const int in = m.input_dim();
    const int out = m.output_dim();
    const int hid = m.hidden_dim;
    std::vector<double> xs(in);
    for (int i = 0; i < in; ++i) xs[i] = (x[i] - m.in_mean[i]) / m.in_std[i];
    std::vector<double> a(hid);
    for (int j = 0; j < hid; ++j) {
        double z = m.bias_hidden[j];
        const double* row = m.weights_in.data() + static_cast<size_t>(j) * in;
        for (int i = 0; i < in; ++i) z += row[i] * xs[i];
        a[j] = z > 0.0 ? z : 0.0;
    }
    std::vector<double> y(out);
    for (int o = 0; o < out; ++o) {
        double z = m.bias_out[o];
        const double* row = m.weights_out.data() + static_cast<size_t>(o) * hid;
        for (int j = 0; j < hid; ++j) z += row[j] * a[j];
        y[o] = z * m.out_std[o] + m.out_mean[o];
    }
    return y;
}

} // namespace detail

/// Feature layout shared by training and inference:
/// [Re before..., Im before..., Re after..., Im after...] for interior models,
/// [Re context..., Im context...] (2W tones) for edge models.
inline std::vector<double> pack_features(const CVec& before, const CVec& after) {
    const size_t w = before.size();
    if (after.size() != w) throw std::invalid_argument("pack_features: side width mismatch");
    std::vector<double> x(4 * w);
    for (size_t i = 0; i < w; ++i) {
        x[i] = before[i].real();
        x[w + i] = before[i].imag();
        x[2 * w + i] = after[i].real();
        x[3 * w + i] = after[i].imag();
    }
    return x;
}

inline std::vector<double> pack_features_edge(const CVec& context) {
    if (context.size() % 2 != 0) throw std::invalid_argument("pack_features_edge: context must hold 2W tones");
    const size_t n = context.size();
    std::vector<double> x(2 * n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = context[i].real();
        x[n + i] = context[i].imag();
    }
    return x;
}

inline std::vector<double> pack_targets(const CVec& gap) {
    const size_t w = gap.size();
    std::vector<double> y(2 * w);
    for (size_t i = 0; i < w; ++i) {
        y[i] = gap[i].real();
        y[w + i] = gap[i].imag();
    }
    return y;
}

inline CVec unpack_outputs(const std::vector<double>& y) {
    const size_t w = y.size() / 2;
    CVec out(w);
    for (size_t i = 0; i < w; ++i) out[i] = cdouble(y[i], y[w + i]);
    return out;
}

/// Interior-model inference: W tones before and after the gap in ascending
/// tone order. Adds forward_flops(W, H) to the counter when given.
inline CVec forward(const NNModel& m, const CVec& before, const CVec& after, uint64_t* flop_counter = nullptr) {
    if (m.edge) throw std::invalid_argument("forward: edge model needs one-sided context");
    if (static_cast<int>(before.size()) != m.gap_width || static_cast<int>(after.size()) != m.gap_width)
        throw std::invalid_argument("forward: context width mismatch");
    if (flop_counter) *flop_counter += forward_flops(m.gap_width, m.hidden_dim);
    return unpack_outputs(detail::nn_raw_forward(m, pack_features(before, after)));
}

/// Edge-model inference, canonical orientation (2W context tones before the
/// gap, ascending). Mirror left-edge gaps before calling.
inline CVec forward_edge(const NNModel& m, const CVec& context, uint64_t* flop_counter = nullptr) {
    if (!m.edge) throw std::invalid_argument("forward_edge: interior model given");
    if (static_cast<int>(context.size()) != 2 * m.gap_width)
        throw std::invalid_argument("forward_edge: context must hold 2W tones");
    if (flop_counter) *flop_counter += forward_flops(m.gap_width, m.hidden_dim);
    return unpack_outputs(detail::nn_raw_forward(m, pack_features_edge(context)));
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainConfig {
    int max_gap_width = 10; // T
    int hidden_dim = 20;    // H
    size_t train_samples = 100000;
    size_t val_samples = 10000;
    int epochs = 50;
    int batch_size = 1000;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    bool train_edge_models = true;
    int threads = 0;

    // data generation ranges (uniform draws per sample)
    ToneGrid grid;
    double snr_db_min = 20.0, snr_db_max = 30.0; // +inf for noise-free data
    double tau0_ns_min = 1.0, tau0_ns_max = 30.0;
    double ray_rate_inv_ns_min = 4.0, ray_rate_inv_ns_max = 10.0;
    double rician_db_min = -15.0, rician_db_max = 15.0;
    double rms_delay_spread_ns = 22.0;
    int max_paths = 64;

    void validate() const {
        if (max_gap_width < 1 || hidden_dim < 1) throw std::invalid_argument("TrainConfig: bad T or H");
        if (train_samples < 1 || batch_size < 1 || epochs < 1) throw std::invalid_argument("TrainConfig: bad sizes");
        grid.validate();
        if (grid.num_tones < 6 * max_gap_width)
            throw std::invalid_argument("TrainConfig: grid too short for the largest gap width");
    }
};

struct NNBank {
    int hidden_dim = 0;
    std::vector<NNModel> interior; // index W-1
    std::vector<NNModel> edge;     // index W-1, may be empty

    int max_width() const { return static_cast<int>(interior.size()); }
    bool has_edge_models() const { return !edge.empty(); }

    const NNModel& interior_model(int w) const {
        if (w < 1 || w > max_width()) throw std::invalid_argument("NNBank: no interior model of width " + std::to_string(w));
        return interior[w - 1];
    }
    const NNModel& edge_model(int w) const {
        if (w < 1 || w > static_cast<int>(edge.size()))
            throw std::invalid_argument("NNBank: no edge model of width " + std::to_string(w));
        return edge[w - 1];
    }
};

/// Flat sample storage for one model's dataset.
struct TrainSet {
    int input_dim = 0;
    int output_dim = 0;
    size_t count = 0;
    std::vector<double> x; // count * input_dim
    std::vector<double> y; // count * output_dim
};

/// One noisy squared-response draw over the full grid with randomized SV and
/// noise parameters from the config ranges.
inline CVec sample_noisy_hsq(const TrainConfig& cfg, Rng& rng) {
    SVParams sv;
    sv.tau0_s = rng.uniform(cfg.tau0_ns_min, cfg.tau0_ns_max) * 1e-9;
    sv.ray_rate_inv_s = rng.uniform(cfg.ray_rate_inv_ns_min, cfg.ray_rate_inv_ns_max) * 1e-9;
    sv.rician_db = rng.uniform(cfg.rician_db_min, cfg.rician_db_max);
    sv.rms_delay_spread_s = cfg.rms_delay_spread_ns * 1e-9;
    sv.max_paths = cfg.max_paths;
    const double snr_db = std::isinf(cfg.snr_db_min) ? cfg.snr_db_min : rng.uniform(cfg.snr_db_min, cfg.snr_db_max);

    const auto ch = sample_sv_channel(sv, rng.next_u64());
    const auto cap = synthesize_iq(ch, cfg.grid, snr_db, rng.next_u64());
    CVec h_sq(cfg.grid.num_tones);
    for (int k = 0; k < cfg.grid.num_tones; ++k) h_sq[k] = cap.iq_reflector[k] * cap.iq_initiator[k];
    return h_sq;
}

namespace detail {

inline CVec reverse_conj(const CVec& v) {
    CVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[v.size() - 1 - i]);
    return out;
}

/// Appends one (features, targets) pair for a width-w gap at a random
/// admissible position. Interior gaps sit anywhere both W-windows fit;
/// edge gaps abut the grid boundary (left-edge samples are mirrored into the
/// canonical context-before orientation).
inline void append_sample(const TrainConfig& cfg, int w, bool edge_variant, Rng& rng, TrainSet& set) {
    const CVec h_sq = sample_noisy_hsq(cfg, rng);
    const int k_count = cfg.grid.num_tones;

    std::vector<double> x, y;
    if (!edge_variant) {
        const int g = w + static_cast<int>(rng.uniform() * (k_count - 3 * w + 1)); // g in [w, K-2w]
        CVec before(h_sq.begin() + (g - w), h_sq.begin() + g);
        CVec after(h_sq.begin() + (g + w), h_sq.begin() + (g + 2 * w));
        CVec gap(h_sq.begin() + g, h_sq.begin() + (g + w));
        x = pack_features(before, after);
        y = pack_targets(gap);
    } else if (rng.uniform() < 0.5) {
        // right-edge gap, canonical orientation
        CVec context(h_sq.begin() + (k_count - 3 * w), h_sq.begin() + (k_count - w));
        CVec gap(h_sq.begin() + (k_count - w), h_sq.end());
        x = pack_features_edge(context);
        y = pack_targets(gap);
    } else {
        // left-edge gap mirrored into canonical orientation
        CVec context(h_sq.begin() + w, h_sq.begin() + 3 * w);
        CVec gap(h_sq.begin(), h_sq.begin() + w);
        x = pack_features_edge(reverse_conj(context));
        y = pack_targets(reverse_conj(gap));
    }
    set.x.insert(set.x.end(), x.begin(), x.end());
    set.y.insert(set.y.end(), y.begin(), y.end());
    ++set.count;
}

} // namespace detail

inline TrainSet make_train_set(const TrainConfig& cfg, int w, bool edge_variant, size_t count, Rng& rng) {
    TrainSet set;
    set.input_dim = 4 * w;
    set.output_dim = 2 * w;
    set.x.reserve(count * set.input_dim);
    set.y.reserve(count * set.output_dim);
    for (size_t i = 0; i < count; ++i) detail::append_sample(cfg, w, edge_variant, rng, set);
    return set;
}

struct NNGradients {
    std::vector<double> weights_in, bias_hidden, weights_out, bias_out;

    void resize_like(const NNModel& m) {
        weights_in.assign(m.weights_in.size(), 0.0);
        bias_hidden.assign(m.bias_hidden.size(), 0.0);
        weights_out.assign(m.weights_out.size(), 0.0);
        bias_out.assign(m.bias_out.size(), 0.0);
    }
};

/// MSE loss (mean over batch and outputs) and its gradients on standardized
/// features/targets. `batch` holds sample indices into the set.
inline double nn_loss_and_gradients(const NNModel& m, const TrainSet& set, const std::vector<size_t>& batch,
                                    NNGradients& grads) {
    const int in = m.input_dim();
    const int out = m.output_dim();
    const int hid = m.hidden_dim;
    grads.resize_like(m);

    std::vector<double> z(hid), a(hid), ys(out), dz(hid);
    double loss = 0.0;
    const double norm = 1.0 / (static_cast<double>(batch.size()) * out);
    for (const size_t s : batch) {
        const double* xs = set.x.data() + s * in;
        const double* ts = set.y.data() + s * out;
        for (int j = 0; j < hid; ++j) {
            double acc = m.bias_hidden[j];
            const double* row = m.weights_in.data() + static_cast<size_t>(j) * in;
            for (int i = 0; i < in; ++i) acc += row[i] * xs[i];
            z[j] = acc;
            a[j] = acc > 0.0 ? acc : 0.0;
        }
        for (int o = 0; o < out; ++o) {
            double acc = m.bias_out[o];
            const double* row = m.weights_out.data() + static_cast<size_t>(o) * hid;
            for (int j = 0; j < hid; ++j) acc += row[j] * a[j];
            ys[o] = acc;
        }
        std::fill(dz.begin(), dz.end(), 0.0);
        for (int o = 0; o < out; ++o) {
            const double err = ys[o] - ts[o];
            loss += err * err * norm;
            const double g = 2.0 * err * norm;
            grads.bias_out[o] += g;
            double* wrow = grads.weights_out.data() + static_cast<size_t>(o) * hid;
            const double* mrow = m.weights_out.data() + static_cast<size_t>(o) * hid;
            for (int j = 0; j < hid; ++j) {
                wrow[j] += g * a[j];
                dz[j] += g * mrow[j];
            }
        }
        for (int j = 0; j < hid; ++j) {
            if (z[j] <= 0.0) continue;
            grads.bias_hidden[j] += dz[j];
            double* wrow = grads.weights_in.data() + static_cast<size_t>(j) * in;
            for (int i = 0; i < in; ++i) wrow[i] += dz[j] * xs[i];
        }
    }
    return loss;
}

namespace detail {

struct AdamState {
    std::vector<double> m, v;
    explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}
};

inline void adam_step(std::vector<double>& w, const std::vector<double>& g, AdamState& st, const TrainConfig& cfg,
                      int t) {
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
    for (size_t i = 0; i < w.size(); ++i) {
        st.m[i] = cfg.adam_beta1 * st.m[i] + (1.0 - cfg.adam_beta1) * g[i];
        st.v[i] = cfg.adam_beta2 * st.v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
        const double mhat = st.m[i] / bc1;
        const double vhat = st.v[i] / bc2;
        w[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
}

inline void standardize(TrainSet& set, std::vector<double>& mean, std::vector<double>& dev, bool targets) {
    const int dim = targets ? set.output_dim : set.input_dim;
    std::vector<double>& data = targets ? set.y : set.x;
    mean.assign(dim, 0.0);
    dev.assign(dim, 0.0);
    for (size_t s = 0; s < set.count; ++s)
        for (int i = 0; i < dim; ++i) mean[i] += data[s * dim + i];
    for (int i = 0; i < dim; ++i) mean[i] /= static_cast<double>(set.count);
    for (size_t s = 0; s < set.count; ++s)
        for (int i = 0; i < dim; ++i) {
            const double d = data[s * dim + i] - mean[i];
            dev[i] += d * d;
        }
    for (int i = 0; i < dim; ++i) dev[i] = std::max(std::sqrt(dev[i] / static_cast<double>(set.count)), 1e-8);
    for (size_t s = 0; s < set.count; ++s)
        for (int i = 0; i < dim; ++i) data[s * dim + i] = (data[s * dim + i] - mean[i]) / dev[i];
}

} // namespace detail

/// Trains one model (interior or edge variant) of the given width.
/// Fully deterministic in the seed: data generation, weight init, and epoch
/// shuffles all come from one stream.
inline NNModel train_model(const TrainConfig& cfg, int w, bool edge_variant, uint64_t seed) {
    cfg.validate();
    Rng rng(seed);

    TrainSet set = make_train_set(cfg, w, edge_variant, cfg.train_samples, rng);

    NNModel m;
    m.gap_width = w;
    m.hidden_dim = cfg.hidden_dim;
    m.edge = edge_variant;
    detail::standardize(set, m.in_mean, m.in_std, false);
    detail::standardize(set, m.out_mean, m.out_std, true);

    const int in = m.input_dim();
    const int out = m.output_dim();
    const int hid = m.hidden_dim;
    const double lim_in = std::sqrt(6.0 / (in + hid));
    const double lim_out = std::sqrt(6.0 / (hid + out));
    m.weights_in.resize(static_cast<size_t>(hid) * in);
    m.bias_hidden.assign(hid, 0.0);
    m.weights_out.resize(static_cast<size_t>(out) * hid);
    m.bias_out.assign(out, 0.0);
    for (auto& v : m.weights_in) v = rng.uniform(-lim_in, lim_in);
    for (auto& v : m.weights_out) v = rng.uniform(-lim_out, lim_out);

    detail::AdamState st_wi(m.weights_in.size()), st_bh(hid), st_wo(m.weights_out.size()), st_bo(out);
    std::vector<size_t> order(set.count);
    std::iota(order.begin(), order.end(), 0);
    NNGradients grads;

    int t = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (size_t i = set.count; i > 1; --i) {
            const size_t j = static_cast<size_t>(rng.uniform() * i);
            std::swap(order[i - 1], order[j]);
        }
        for (size_t start = 0; start + cfg.batch_size <= set.count; start += cfg.batch_size) {
            const std::vector<size_t> batch(order.begin() + start, order.begin() + start + cfg.batch_size);
            nn_loss_and_gradients(m, set, batch, grads);
            ++t;
            detail::adam_step(m.weights_in, grads.weights_in, st_wi, cfg, t);
            detail::adam_step(m.bias_hidden, grads.bias_hidden, st_bh, cfg, t);
            detail::adam_step(m.weights_out, grads.weights_out, st_wo, cfg, t);
            detail::adam_step(m.bias_out, grads.bias_out, st_bo, cfg, t);
        }
    }
    return m;
}

/// Trains the whole bank: interior models for widths 1..T plus the edge
/// variants. Distinct models train in parallel on independent seed streams.
inline NNBank train_bank(const TrainConfig& cfg, uint64_t seed) {
    cfg.validate();
    NNBank bank;
    bank.hidden_dim = cfg.hidden_dim;
    bank.interior.resize(cfg.max_gap_width);
    if (cfg.train_edge_models) bank.edge.resize(cfg.max_gap_width);

    const size_t jobs = cfg.max_gap_width * (cfg.train_edge_models ? 2 : 1);
    parallel_for(jobs, cfg.threads, [&](size_t idx) {
        const int w = static_cast<int>(idx % cfg.max_gap_width) + 1;
        const bool edge = idx >= static_cast<size_t>(cfg.max_gap_width);
        NNModel m = train_model(cfg, w, edge, mix_seed(seed, idx));
        if (edge)
            bank.edge[w - 1] = std::move(m);
        else
            bank.interior[w - 1] = std::move(m);
    });
    return bank;
}

// ---------------------------------------------------------------------------
// Persistence: versioned header, then per-model flat little-endian doubles in
// declared order (weights_in, bias_hidden, weights_out, bias_out, in_mean,
// in_std, out_mean, out_std).
// ---------------------------------------------------------------------------

namespace detail {

static_assert(std::endian::native == std::endian::little, "bank files are little-endian");

inline void put_u32(std::ofstream& f, uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); }
inline void put_u8(std::ofstream& f, uint8_t v) { f.write(reinterpret_cast<const char*>(&v), 1); }
inline void put_f64s(std::ofstream& f, const std::vector<double>& v) {
    f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}
inline uint32_t get_u32(std::ifstream& f) {
    uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
inline uint8_t get_u8(std::ifstream& f) {
    uint8_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 1);
    return v;
}
inline void get_f64s(std::ifstream& f, std::vector<double>& v, size_t n) {
    v.resize(n);
    f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * 8));
}

} // namespace detail

inline void save_bank(const NNBank& bank, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_bank: cannot open " + path);
    f.write("NBNN", 4);
    detail::put_u32(f, 1); // version
    detail::put_u8(f, 8);  // bytes per stored value (double precision)
    detail::put_u32(f, static_cast<uint32_t>(bank.hidden_dim));
    detail::put_u32(f, static_cast<uint32_t>(bank.interior.size()));
    detail::put_u32(f, static_cast<uint32_t>(bank.interior.size() + bank.edge.size()));
    auto write_model = [&](const NNModel& m) {
        detail::put_u8(f, m.edge ? 1 : 0);
        detail::put_u32(f, static_cast<uint32_t>(m.gap_width));
        detail::put_u32(f, static_cast<uint32_t>(m.hidden_dim));
        detail::put_f64s(f, m.weights_in);
        detail::put_f64s(f, m.bias_hidden);
        detail::put_f64s(f, m.weights_out);
        detail::put_f64s(f, m.bias_out);
        detail::put_f64s(f, m.in_mean);
        detail::put_f64s(f, m.in_std);
        detail::put_f64s(f, m.out_mean);
        detail::put_f64s(f, m.out_std);
    };
    for (const auto& m : bank.interior) write_model(m);
    for (const auto& m : bank.edge) write_model(m);
    if (!f) throw std::runtime_error("save_bank: write failed for " + path);
}

inline NNBank load_bank(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_bank: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "NBNN", 4) != 0) throw std::runtime_error("load_bank: bad magic in " + path);
    if (detail::get_u32(f) != 1) throw std::runtime_error("load_bank: unsupported version");
    if (detail::get_u8(f) != 8) throw std::runtime_error("load_bank: unsupported precision");

    NNBank bank;
    bank.hidden_dim = static_cast<int>(detail::get_u32(f));
    const uint32_t interior_count = detail::get_u32(f);
    const uint32_t total = detail::get_u32(f);
    bank.interior.resize(interior_count);
    bank.edge.resize(total - interior_count);
    for (uint32_t i = 0; i < total; ++i) {
        NNModel m;
        m.edge = detail::get_u8(f) != 0;
        m.gap_width = static_cast<int>(detail::get_u32(f));
        m.hidden_dim = static_cast<int>(detail::get_u32(f));
        const size_t in = 4ull * m.gap_width;
        const size_t out = 2ull * m.gap_width;
        detail::get_f64s(f, m.weights_in, static_cast<size_t>(m.hidden_dim) * in);
        detail::get_f64s(f, m.bias_hidden, m.hidden_dim);
        detail::get_f64s(f, m.weights_out, out * m.hidden_dim);
        detail::get_f64s(f, m.bias_out, out);
        detail::get_f64s(f, m.in_mean, in);
        detail::get_f64s(f, m.in_std, in);
        detail::get_f64s(f, m.out_mean, out);
        detail::get_f64s(f, m.out_std, out);
        if (!f) throw std::runtime_error("load_bank: truncated file " + path);
        if (m.gap_width < 1 || m.gap_width > static_cast<int>(interior_count))
            throw std::runtime_error("load_bank: corrupt model header");
        (m.edge ? bank.edge : bank.interior)[m.gap_width - 1] = std::move(m);
    }
    return bank;
}

} // namespace nbrange

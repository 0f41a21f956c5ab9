#pragma once

#include <cmath>
#include <vector>

#include "nbrange/channel.hpp"
#include "nbrange/common.hpp"

namespace nbrange {

/// Two-way squared channel response h^2, defined only where available=true.
struct TwoWayResponse {
    ToneGrid grid;
    CVec h_sq;
    std::vector<uint8_t> available;
};

/// Maximal run of available tones, inclusive indices.
struct ToneBand {
    int first = 0;
    int last = 0;

    int length() const { return last - first + 1; }
};

struct ReconstructedChannel {
    CVec h_tilde; // zero outside bands
    std::vector<ToneBand> bands;
};

/// h^2_k = IQ_R(f_k) * IQ_I(f_k); the PLL phase cancels in the product.
inline TwoWayResponse two_way(const IQCapture& capture) {
    TwoWayResponse r;
    r.grid = capture.grid;
    const int k_count = capture.grid.num_tones;
    r.h_sq.assign(k_count, 0.0);
    r.available = capture.available;
    for (int k = 0; k < k_count; ++k)
        if (capture.available[k]) r.h_sq[k] = capture.iq_reflector[k] * capture.iq_initiator[k];
    return r;
}

/// Maximal runs of available tones, ascending. Empty when nothing is available.
inline std::vector<ToneBand> find_bands(const std::vector<uint8_t>& available) {
    std::vector<ToneBand> bands;
    const int n = static_cast<int>(available.size());
    int k = 0;
    while (k < n) {
        if (!available[k]) {
            ++k;
            continue;
        }
        int start = k;
        while (k < n && available[k]) ++k;
        bands.push_back({start, k - 1});
    }
    return bands;
}

/// Resolves the per-tone sqrt sign ambiguity within one band. The first tone
/// takes the principal square root; each later tone picks the sign that keeps
/// the phase increment to the previous tone inside (-pi/2, pi/2]. The whole
/// band keeps a global +-1 ambiguity relative to the true one-way response.
/// Zero-magnitude tones stay zero and leave the phase reference untouched.
inline CVec reconstruct_band(const TwoWayResponse& response, const ToneBand& band) {
    if (band.first < 0 || band.last >= static_cast<int>(response.h_sq.size()) || band.first > band.last)
        throw std::invalid_argument("reconstruct_band: band out of range");
    for (int k = band.first; k <= band.last; ++k)
        if (!response.available[k]) throw std::invalid_argument("reconstruct_band: band contains unavailable tone");

    CVec out(band.length());
    cdouble ref = 0.0; // last nonzero reconstructed tone
    for (int k = band.first; k <= band.last; ++k) {
        cdouble r = std::sqrt(response.h_sq[k]); // principal branch, cut on the negative real axis
        if (r == cdouble(0.0, 0.0)) {
            out[k - band.first] = 0.0;
            continue;
        }
        if (ref != cdouble(0.0, 0.0)) {
            const cdouble align = r * std::conj(ref);
            if (align.real() < 0.0 || (align.real() == 0.0 && align.imag() < 0.0)) r = -r;
        }
        out[k - band.first] = r;
        ref = r;
    }
    return out;
}

/// Reconstructs every band of the response; h_tilde is zero at gap tones.
inline ReconstructedChannel reconstruct(const TwoWayResponse& response) {
    ReconstructedChannel rec;
    rec.bands = find_bands(response.available);
    rec.h_tilde.assign(response.h_sq.size(), 0.0);
    for (const auto& band : rec.bands) {
        const CVec vals = reconstruct_band(response, band);
        for (int k = band.first; k <= band.last; ++k) rec.h_tilde[k] = vals[k - band.first];
    }
    return rec;
}

} // namespace nbrange

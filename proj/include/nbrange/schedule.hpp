#pragma once

#include <algorithm>
#include <vector>

#include "nbrange/channel.hpp"
#include "nbrange/nn.hpp"
#include "nbrange/reconstruct.hpp"

namespace nbrange {

/// Input tones a width-W gap recovery reads. Interior gaps read W tones on
/// each side; gaps whose W-window would leave the grid fall back to the edge
/// variant reading 2W tones from the other side (left_edge marks gaps whose
/// context sits AFTER them and therefore go through the mirror transform).
struct GapInputSpec {
    std::vector<int> required; // in-grid input tone indices
    bool edge = false;
    bool left_edge = false;
};

inline GapInputSpec gap_input_spec(const GapBlock& gap, int num_tones) {
    GapInputSpec spec;
    const int w = gap.width();
    const bool clip_left = gap.first - w < 0;
    const bool clip_right = gap.last + w > num_tones - 1;
    auto add_range = [&](int a, int b) {
        for (int k = std::max(a, 0); k <= std::min(b, num_tones - 1); ++k) spec.required.push_back(k);
    };
    if (!clip_left && !clip_right) {
        add_range(gap.first - w, gap.first - 1);
        add_range(gap.last + 1, gap.last + w);
    } else if (clip_left) {
        spec.edge = true;
        spec.left_edge = true;
        add_range(gap.last + 1, gap.last + 2 * w);
    } else {
        spec.edge = true;
        add_range(gap.first - 2 * w, gap.first - 1);
    }
    return spec;
}

struct ScheduledGap {
    GapBlock block;
    /// true when every required input tone was originally measured; false when
    /// the inputs include other gaps' tones (recovered earlier or zero-padded)
    bool inputs_complete = true;
};

struct ScheduleResult {
    std::vector<ScheduledGap> order;
};

/// Gap-recovery scheduling. Rounds of a fixed-point iteration: gaps whose
/// required inputs are all available are emitted (input order within a
/// round) and their tones become available for the next round; when a round
/// makes no progress, the remaining mutually dependent gaps are emitted
/// smallest-first and recovered with zero-padded inputs.
inline ScheduleResult schedule_gaps(const GapMap& gaps, const std::vector<uint8_t>& available) {
    const int num_tones = static_cast<int>(available.size());
    gaps.validate(num_tones);

    std::vector<uint8_t> avail = available;
    std::vector<int> current(gaps.blocks.size());
    for (size_t i = 0; i < current.size(); ++i) current[i] = static_cast<int>(i);

    std::vector<GapInputSpec> specs;
    specs.reserve(gaps.blocks.size());
    std::vector<uint8_t> complete(gaps.blocks.size(), 1);
    for (size_t i = 0; i < gaps.blocks.size(); ++i) {
        specs.push_back(gap_input_spec(gaps.blocks[i], num_tones));
        for (int k : specs.back().required)
            if (!available[k]) complete[i] = 0;
    }

    ScheduleResult result;
    std::vector<int> old_not_scheduled;
    bool have_old = false;
    while (!current.empty()) {
        std::vector<int> scheduled, not_scheduled;
        for (int j : current) {
            bool ok = true;
            for (int k : specs[j].required)
                if (!avail[k]) { ok = false; break; }
            (ok ? scheduled : not_scheduled).push_back(j);
        }
        if (not_scheduled.empty()) {
            for (int j : scheduled) result.order.push_back({gaps.blocks[j], complete[j] != 0});
            break;
        }
        if (have_old && not_scheduled == old_not_scheduled) {
            std::stable_sort(not_scheduled.begin(), not_scheduled.end(), [&](int a, int b) {
                return gaps.blocks[a].width() < gaps.blocks[b].width();
            });
            for (int j : not_scheduled) result.order.push_back({gaps.blocks[j], complete[j] != 0});
            break;
        }
        for (int j : scheduled) {
            result.order.push_back({gaps.blocks[j], complete[j] != 0});
            for (int k = gaps.blocks[j].first; k <= gaps.blocks[j].last; ++k) avail[k] = 1;
        }
        old_not_scheduled = std::move(not_scheduled);
        have_old = true;
        current = old_not_scheduled;
    }
    return result;
}

struct RecoveryResult {
    TwoWayResponse response;            // h^2 with recovered gaps marked available
    ScheduleResult schedule;
    std::vector<GapBlock> unrecovered;  // wider than the bank, or no usable context
    uint64_t flops = 0;                 // forward-pass flops spent
};

/// Fills every gap of the map with the width-matched model, in schedule
/// order. Earlier recoveries count as available inputs; tones that are still
/// unknown (mutual-dependence case) enter as zeros. Left-edge gaps go through
/// the reverse+conjugate mirror so one edge variant per width serves both
/// spectrum ends.
inline RecoveryResult recover_gaps(const TwoWayResponse& resp, const GapMap& gaps, const NNBank& bank) {
    const int num_tones = resp.grid.num_tones;
    RecoveryResult result;
    result.schedule = schedule_gaps(gaps, resp.available);
    result.response = resp;

    std::vector<uint8_t> known = resp.available;
    CVec values = resp.h_sq;
    for (int k = 0; k < num_tones; ++k)
        if (!known[k]) values[k] = 0.0;

    auto gather = [&](int a, int b) {
        CVec out;
        out.reserve(b - a + 1);
        for (int k = a; k <= b; ++k) {
            if (k < 0 || k >= num_tones || !known[k])
                out.push_back(0.0); // zero-padded input
            else
                out.push_back(values[k]);
        }
        return out;
    };

    for (const auto& item : result.schedule.order) {
        const GapBlock& gap = item.block;
        const int w = gap.width();
        const GapInputSpec spec = gap_input_spec(gap, num_tones);
        if (w > bank.max_width() || (spec.edge && !bank.has_edge_models()) || spec.required.empty()) {
            result.unrecovered.push_back(gap);
            continue;
        }
        CVec filled;
        if (!spec.edge) {
            filled = forward(bank.interior_model(w), gather(gap.first - w, gap.first - 1),
                             gather(gap.last + 1, gap.last + w), &result.flops);
        } else if (spec.left_edge) {
            const CVec ctx = detail::reverse_conj(gather(gap.last + 1, gap.last + 2 * w));
            filled = detail::reverse_conj(forward_edge(bank.edge_model(w), ctx, &result.flops));
        } else {
            filled = forward_edge(bank.edge_model(w), gather(gap.first - 2 * w, gap.first - 1), &result.flops);
        }
        for (int k = gap.first; k <= gap.last; ++k) {
            values[k] = filled[k - gap.first];
            known[k] = 1;
        }
    }

    result.response.h_sq = std::move(values);
    result.response.available = std::move(known);
    return result;
}

} // namespace nbrange

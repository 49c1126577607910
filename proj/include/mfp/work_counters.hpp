#pragma once

#include <algorithm>
#include <cstdint>

namespace mfp {

/**
 * Operation counts for comparing the fast column procedure with naive evaluation.
 *
 * Instrumented functions take an optional `WorkCounters *`; pass nullptr to skip counting.
 * A counter object is not synchronized, so give each thread its own and merge afterwards.
 */
struct WorkCounters {
    /// (f(x), g(x)) evaluations, one per stream element per block.
    std::uint64_t pair_evals = 0;
    /// Direct h_i(x) = f(x) + i*g(x) evaluations. Only the naive path does these.
    std::uint64_t composed_evals = 0;
    /// Levels of the progression recursion entered, summed over all scans.
    std::uint64_t scan_frames = 0;
    /// Jumps over a run of values >= t to the next wrap-around.
    std::uint64_t scan_skips = 0;
    /// Values emitted below the threshold, i.e. the sub-threshold cell count Y.
    std::uint64_t emitted_cells = 0;
    /// Modular inversions for index recovery.
    std::uint64_t inversions = 0;
    /// Deepest recursion seen by a single scan.
    std::uint64_t max_scan_depth = 0;

    /// Every cell the fast path looked at: emitted values, skips and recursion frames.
    std::uint64_t cell_touches() const noexcept {
        return emitted_cells + scan_skips + scan_frames;
    }

    /// Work not attributable to output: one pair evaluation plus the recursion frames per column.
    std::uint64_t non_output_work() const noexcept {
        return pair_evals + scan_frames;
    }

    WorkCounters &operator+=(const WorkCounters &o) noexcept {
        pair_evals += o.pair_evals;
        composed_evals += o.composed_evals;
        scan_frames += o.scan_frames;
        scan_skips += o.scan_skips;
        emitted_cells += o.emitted_cells;
        inversions += o.inversions;
        max_scan_depth = std::max(max_scan_depth, o.max_scan_depth);
        return *this;
    }
};

} // namespace mfp

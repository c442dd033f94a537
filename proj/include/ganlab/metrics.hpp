#pragma once

#include <cstdint>
#include <vector>

#include "ganlab/types.hpp"

namespace ganlab {

struct Support {
    double x_min, x_max, y_min, y_max;
};

// Normalized 2-D histogram. `mass` sums to 1 when at least one point landed
// inside the support, and is all-zero otherwise; `dropped` counts the points
// that fell outside.
struct Histogram2D {
    Index bins_x = 0, bins_y = 0;
    Support support{};
    Matrix mass;  // bins_x rows, bins_y cols
    Index dropped = 0;

    double total_mass() const { return mass.sum(); }
};

// Bounding box of the ground truth expanded by a 10% margin per side.
// A degenerate axis (all values equal) is widened by +-0.5 instead, so this
// never fails. Requires at least one point.
Support fit_support(const Matrix& points);

// Bin points into a bins x bins grid over the support. Points outside are
// dropped (and counted); the inside mass is normalized to 1. The right/top
// edges are inclusive.
Histogram2D histogram2d(const Matrix& points, const Support& support, Index bins);

// Jensen-Shannon divergence with base-2 logarithms, so the value lives in
// [0,1]: JS(P,Q) = KL(P||M)/2 + KL(Q||M)/2 with M = (P+Q)/2 and 0*log(0/.)=0.
// When exactly one histogram is empty the divergence is defined as 1 (the
// disjoint-support limit); two empty histograms are identical, hence 0.
// Throws ConfigError when bins or supports differ.
double js_divergence(const Histogram2D& p, const Histogram2D& q);

// Fit the support from the ground truth only, histogram both samples on it,
// and take the divergence. Keeping the support pinned to the ground truth
// makes values comparable across checkpoints and across runs.
double js_between_samples(const Matrix& generated, const Matrix& ground_truth, Index bins);

// 2-D projection of an image batch: per-image pixel mean and pixel variance.
// Lets image sets reuse the same histogram/JS machinery as the 2-D datasets.
Matrix mean_variance_projection(const Matrix& images);

// One checkpoint row of a training run.
struct RunLogRow {
    long epoch = 0;
    double js_divergence = 0.0;
    std::int64_t cumulative_elapsed_ns = 0;
    long g_updates = 0;
    long d_updates = 0;
};

struct RunLog {
    std::vector<RunLogRow> rows;
};

// Append a row, enforcing strictly increasing epochs and elapsed time and
// non-decreasing update counts. Throws OrderingError otherwise.
void record_checkpoint(RunLog& log, const RunLogRow& row);

}  // namespace ganlab

#include "ganlab/metrics.hpp"

#include <cmath>
#include <string>

#include "ganlab/errors.hpp"

namespace ganlab {

namespace {

void expand_axis(double& lo, double& hi) {
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        const double margin = 0.1 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
}

bool same_geometry(const Histogram2D& p, const Histogram2D& q) {
    return p.bins_x == q.bins_x && p.bins_y == q.bins_y &&
           p.support.x_min == q.support.x_min && p.support.x_max == q.support.x_max &&
           p.support.y_min == q.support.y_min && p.support.y_max == q.support.y_max;
}

}  // namespace

Support fit_support(const Matrix& points) {
    if (points.rows() < 1 || points.cols() != 2)
        throw ConfigError("fit_support: need an n x 2 matrix with n >= 1");
    Support s{points.col(0).minCoeff(), points.col(0).maxCoeff(), points.col(1).minCoeff(),
              points.col(1).maxCoeff()};
    expand_axis(s.x_min, s.x_max);
    expand_axis(s.y_min, s.y_max);
    return s;
}

Histogram2D histogram2d(const Matrix& points, const Support& support, Index bins) {
    if (bins < 1) throw ConfigError("histogram2d: bins must be >= 1");
    if (!(support.x_min < support.x_max && support.y_min < support.y_max))
        throw ConfigError("histogram2d: degenerate support");

    Histogram2D hist;
    hist.bins_x = bins;
    hist.bins_y = bins;
    hist.support = support;
    hist.mass = Matrix::Zero(bins, bins);

    const double x_scale = bins / (support.x_max - support.x_min);
    const double y_scale = bins / (support.y_max - support.y_min);
    Index inside = 0;
    for (Index r = 0; r < points.rows(); ++r) {
        const double x = points(r, 0);
        const double y = points(r, 1);
        if (x < support.x_min || x > support.x_max || y < support.y_min || y > support.y_max) {
            ++hist.dropped;
            continue;
        }
        Index ix = static_cast<Index>((x - support.x_min) * x_scale);
        Index iy = static_cast<Index>((y - support.y_min) * y_scale);
        if (ix == bins) ix = bins - 1;  // hit the top edge exactly
        if (iy == bins) iy = bins - 1;
        hist.mass(ix, iy) += 1.0;
        ++inside;
    }
    if (inside > 0) hist.mass /= static_cast<double>(inside);
    return hist;
}

double js_divergence(const Histogram2D& p, const Histogram2D& q) {
    if (!same_geometry(p, q))
        throw ConfigError("js_divergence: histograms have different bins or support");

    const bool p_empty = p.total_mass() == 0.0;
    const bool q_empty = q.total_mass() == 0.0;
    if (p_empty && q_empty) return 0.0;
    if (p_empty || q_empty) return 1.0;  // disjoint-support limit

    double js = 0.0;
    for (Index i = 0; i < p.bins_x; ++i) {
        for (Index j = 0; j < p.bins_y; ++j) {
            const double pi = p.mass(i, j);
            const double qi = q.mass(i, j);
            const double m = 0.5 * (pi + qi);
            if (m == 0.0) continue;
            if (pi > 0.0) js += 0.5 * pi * std::log2(pi / m);
            if (qi > 0.0) js += 0.5 * qi * std::log2(qi / m);
        }
    }
    // clip the tiny negative/overshoot noise of float summation
    if (js < 0.0) return 0.0;
    if (js > 1.0) return 1.0;
    return js;
}

double js_between_samples(const Matrix& generated, const Matrix& ground_truth, Index bins) {
    if (generated.rows() < 1 || ground_truth.rows() < 1)
        throw ConfigError("js_between_samples: both samples must be nonempty");
    const Support support = fit_support(ground_truth);
    const Histogram2D p = histogram2d(generated, support, bins);
    const Histogram2D q = histogram2d(ground_truth, support, bins);
    return js_divergence(p, q);
}

Matrix mean_variance_projection(const Matrix& images) {
    if (images.rows() < 1 || images.cols() < 1)
        throw ConfigError("mean_variance_projection: empty image batch");
    Matrix projected(images.rows(), 2);
    const double n = static_cast<double>(images.cols());
    for (Index r = 0; r < images.rows(); ++r) {
        const double mean = images.row(r).mean();
        projected(r, 0) = mean;
        projected(r, 1) = (images.row(r).array() - mean).square().sum() / n;
    }
    return projected;
}

void record_checkpoint(RunLog& log, const RunLogRow& row) {
    if (!log.rows.empty()) {
        const RunLogRow& last = log.rows.back();
        if (row.epoch <= last.epoch)
            throw OrderingError("checkpoint epoch " + std::to_string(row.epoch) +
                                " not after " + std::to_string(last.epoch));
        if (row.cumulative_elapsed_ns <= last.cumulative_elapsed_ns)
            throw OrderingError("cumulative elapsed time must strictly increase");
        if (row.g_updates < last.g_updates || row.d_updates < last.d_updates)
            throw OrderingError("update counts must be non-decreasing");
    }
    log.rows.push_back(row);
}

}  // namespace ganlab

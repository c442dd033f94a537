#pragma once

#include <filesystem>

#include "ganlab/metrics.hpp"
#include "ganlab/types.hpp"

namespace ganlab {

// Scatter snapshot of a checkpoint: ground truth in blue underneath,
// generated sample in orange on top, viewBox fitted to the metric support.
void emit_scatter_svg(const Matrix& real, const Matrix& generated, const Support& support,
                      const std::filesystem::path& path);

// 4x4 grid of flattened grayscale images rendered as SVG rectangles.
// Uses the first 16 rows of `images`.
void emit_digit_grid_svg(const Matrix& images, Index image_rows, Index image_cols,
                         const std::filesystem::path& path);

}  // namespace ganlab

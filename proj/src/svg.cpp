#include "ganlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "ganlab/errors.hpp"

namespace ganlab {

namespace {

// Paper colour convention: ground truth blue, generated orange.
constexpr const char* kBlue = "#1f77b4";
constexpr const char* kOrange = "#ff7f0e";

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void write_markers(std::ofstream& out, const Matrix& points, const Support& support,
                   double radius, const char* color) {
    for (Index r = 0; r < points.rows(); ++r) {
        // SVG y grows downward; mirror within the support box.
        const double cy = support.y_min + support.y_max - points(r, 1);
        out << "  <circle cx=\"" << num(points(r, 0)) << "\" cy=\"" << num(cy) << "\" r=\""
            << num(radius) << "\" fill=\"" << color << "\"/>\n";
    }
}

}  // namespace

void emit_scatter_svg(const Matrix& real, const Matrix& generated, const Support& support,
                      const std::filesystem::path& path) {
    if (real.rows() < 1 || generated.rows() < 1)
        throw ConfigError("emit_scatter_svg: both samples must be nonempty");
    auto out = open_out(path);

    const double width = support.x_max - support.x_min;
    const double height = support.y_max - support.y_min;
    const double radius = std::max(width, height) / 200.0;

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\""
        << num(support.x_min) << " " << num(support.y_min) << " " << num(width) << " "
        << num(height) << "\">\n";
    out << "  <rect x=\"" << num(support.x_min) << "\" y=\"" << num(support.y_min)
        << "\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" fill=\"white\"/>\n";
    write_markers(out, real, support, radius, kBlue);
    write_markers(out, generated, support, radius, kOrange);
    out << "</svg>\n";
    if (!out) throw IoError("failed writing " + path.string());
}

void emit_digit_grid_svg(const Matrix& images, Index image_rows, Index image_cols,
                         const std::filesystem::path& path) {
    if (images.rows() < 1) throw ConfigError("emit_digit_grid_svg: empty image batch");
    if (images.cols() != image_rows * image_cols)
        throw ShapeError("emit_digit_grid_svg: row length " + std::to_string(images.cols()) +
                         " != " + std::to_string(image_rows) + "*" + std::to_string(image_cols));
    auto out = open_out(path);

    const Index tiles = std::min<Index>(16, images.rows());
    const int cell = 4;   // svg units per pixel
    const int gap = 8;    // between tiles
    const int tile_w = static_cast<int>(image_cols) * cell;
    const int tile_h = static_cast<int>(image_rows) * cell;
    const int total_w = 4 * tile_w + 5 * gap;
    const int total_h = 4 * tile_h + 5 * gap;

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\""
        << total_h << "\" viewBox=\"0 0 " << total_w << " " << total_h << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << total_w << "\" height=\"" << total_h
        << "\" fill=\"black\"/>\n";
    for (Index t = 0; t < tiles; ++t) {
        const int ox = gap + static_cast<int>(t % 4) * (tile_w + gap);
        const int oy = gap + static_cast<int>(t / 4) * (tile_h + gap);
        for (Index p = 0; p < images.cols(); ++p) {
            const double v = std::clamp(images(t, p), 0.0, 1.0);
            const int gray = static_cast<int>(std::lround(v * 255.0));
            if (gray == 0) continue;  // black background already covers it
            const int px = ox + static_cast<int>(p % image_cols) * cell;
            const int py = oy + static_cast<int>(p / image_cols) * cell;
            out << "  <rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"rgb(" << gray << "," << gray << ","
                << gray << ")\"/>\n";
        }
    }
    out << "</svg>\n";
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ganlab

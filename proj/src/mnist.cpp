#include "ganlab/mnist.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "ganlab/errors.hpp"

namespace ganlab {

namespace {

std::uint32_t read_u32_be(std::istream& in, const std::filesystem::path& path) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
        throw IoError("truncated header in " + path.string());
    return (static_cast<std::uint32_t>(bytes[0]) << 24) |
           (static_cast<std::uint32_t>(bytes[1]) << 16) |
           (static_cast<std::uint32_t>(bytes[2]) << 8) | static_cast<std::uint32_t>(bytes[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t value) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(value >> 24), static_cast<unsigned char>(value >> 16),
        static_cast<unsigned char>(value >> 8), static_cast<unsigned char>(value)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

}  // namespace

MnistSet load_mnist_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
    auto images_in = open_for_read(images_path);
    const std::uint32_t images_magic = read_u32_be(images_in, images_path);
    if (images_magic != kIdxImagesMagic)
        throw FormatError("bad images magic " + std::to_string(images_magic) + " in " +
                          images_path.string() + " (expected " +
                          std::to_string(kIdxImagesMagic) + ")");
    const std::uint32_t n_images = read_u32_be(images_in, images_path);
    const std::uint32_t rows = read_u32_be(images_in, images_path);
    const std::uint32_t cols = read_u32_be(images_in, images_path);

    auto labels_in = open_for_read(labels_path);
    const std::uint32_t labels_magic = read_u32_be(labels_in, labels_path);
    if (labels_magic != kIdxLabelsMagic)
        throw FormatError("bad labels magic " + std::to_string(labels_magic) + " in " +
                          labels_path.string() + " (expected " +
                          std::to_string(kIdxLabelsMagic) + ")");
    const std::uint32_t n_labels = read_u32_be(labels_in, labels_path);

    if (n_images != n_labels)
        throw ConsistencyError("image count " + std::to_string(n_images) + " != label count " +
                               std::to_string(n_labels));

    MnistSet set;
    set.image_rows = static_cast<Index>(rows);
    set.image_cols = static_cast<Index>(cols);
    const size_t pixels = static_cast<size_t>(rows) * cols;

    std::vector<unsigned char> buffer(pixels);
    set.images.resize(static_cast<Index>(n_images), static_cast<Index>(pixels));
    for (std::uint32_t i = 0; i < n_images; ++i) {
        if (!images_in.read(reinterpret_cast<char*>(buffer.data()),
                            static_cast<std::streamsize>(pixels)))
            throw IoError("truncated image data at image " + std::to_string(i) + " in " +
                          images_path.string());
        for (size_t p = 0; p < pixels; ++p)
            set.images(static_cast<Index>(i), static_cast<Index>(p)) = buffer[p] / 255.0;
    }

    set.labels.resize(n_labels);
    if (!labels_in.read(reinterpret_cast<char*>(set.labels.data()),
                        static_cast<std::streamsize>(n_labels)))
        throw IoError("truncated label data in " + labels_path.string());
    for (std::uint8_t label : set.labels)
        if (label > 9)
            throw FormatError("label " + std::to_string(label) + " out of digit range in " +
                              labels_path.string());
    return set;
}

void write_mnist_idx(const MnistSet& set, const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path) {
    std::ofstream images_out(images_path, std::ios::binary);
    if (!images_out) throw IoError("cannot open " + images_path.string() + " for writing");
    write_u32_be(images_out, kIdxImagesMagic);
    write_u32_be(images_out, static_cast<std::uint32_t>(set.size()));
    write_u32_be(images_out, static_cast<std::uint32_t>(set.image_rows));
    write_u32_be(images_out, static_cast<std::uint32_t>(set.image_cols));
    std::vector<unsigned char> buffer(static_cast<size_t>(set.images.cols()));
    for (Index i = 0; i < set.images.rows(); ++i) {
        for (Index p = 0; p < set.images.cols(); ++p)
            buffer[static_cast<size_t>(p)] =
                static_cast<unsigned char>(std::lround(set.images(i, p) * 255.0));
        images_out.write(reinterpret_cast<const char*>(buffer.data()),
                         static_cast<std::streamsize>(buffer.size()));
    }
    if (!images_out) throw IoError("failed writing " + images_path.string());

    std::ofstream labels_out(labels_path, std::ios::binary);
    if (!labels_out) throw IoError("cannot open " + labels_path.string() + " for writing");
    write_u32_be(labels_out, kIdxLabelsMagic);
    write_u32_be(labels_out, static_cast<std::uint32_t>(set.labels.size()));
    labels_out.write(reinterpret_cast<const char*>(set.labels.data()),
                     static_cast<std::streamsize>(set.labels.size()));
    if (!labels_out) throw IoError("failed writing " + labels_path.string());
}

MnistSet subset_mnist(const MnistSet& set, const std::map<int, Index>& wanted) {
    Index total = 0;
    for (const auto& [digit, count] : wanted) {
        if (digit < 0 || digit > 9)
            throw ConfigError("subset_mnist: digit " + std::to_string(digit) + " out of range");
        if (count < 0) throw ConfigError("subset_mnist: negative count requested");
        total += count;
    }
    if (total == 0) throw ConfigError("subset_mnist: empty request");

    MnistSet out;
    out.image_rows = set.image_rows;
    out.image_cols = set.image_cols;
    out.images.resize(total, set.images.cols());
    out.labels.reserve(static_cast<size_t>(total));

    Index row = 0;
    for (const auto& [digit, count] : wanted) {  // std::map iterates by ascending digit
        Index taken = 0;
        for (Index i = 0; i < set.size() && taken < count; ++i) {
            if (set.labels[static_cast<size_t>(i)] == digit) {
                out.images.row(row++) = set.images.row(i);
                out.labels.push_back(static_cast<std::uint8_t>(digit));
                ++taken;
            }
        }
        if (taken < count)
            throw ConfigError("subset_mnist: requested " + std::to_string(count) + " images of digit " +
                              std::to_string(digit) + " but only " + std::to_string(taken) +
                              " available (short by " + std::to_string(count - taken) + ")");
    }
    return out;
}

}  // namespace ganlab

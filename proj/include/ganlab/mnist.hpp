#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "ganlab/types.hpp"

namespace ganlab {

// MNIST-style image set: one flattened image per row, pixel values in [0,1].
struct MnistSet {
    Matrix images;                     // n x (rows*cols)
    std::vector<std::uint8_t> labels;  // digits 0-9, length n
    Index image_rows = 28;
    Index image_cols = 28;

    Index size() const { return images.rows(); }
};

// IDX binary format, bit-exact: 4-byte big-endian magic (0x00000803 images,
// 0x00000801 labels), big-endian dimension sizes, unsigned pixel bytes.
inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;  // 2051
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;  // 2049

// Throws FormatError on a wrong magic, ConsistencyError when the image and
// label counts disagree, IoError on unreadable or truncated files.
MnistSet load_mnist_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);

// Inverse of the loader; pixel values are rounded back to bytes.
void write_mnist_idx(const MnistSet& set, const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path);

// First-k selection per digit in file order; output is the concatenation by
// ascending digit, so the result is bit-stable across machines. Throws
// ConfigError when a digit has fewer images than requested (reporting the
// shortfall) or when the request is empty.
MnistSet subset_mnist(const MnistSet& set, const std::map<int, Index>& wanted);

}  // namespace ganlab

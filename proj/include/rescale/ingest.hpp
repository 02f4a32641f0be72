#pragma once

#include "rescale/gaussmodel.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rescale {

/// Reads one point per line, comma-separated. Blank lines and lines starting
/// with '#' are ignored; a first row whose first field is not a number is a
/// header. Throws ParseError on ragged rows or bad numbers, InsufficientData
/// for fewer than two rows.
PointSet read_points_csv(std::istream& in);

/// Shortest round-trip representation of every value.
void write_points_csv(std::ostream& out, const PointSet& points);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Decoded RGB raster, samples row-major with channel innermost.
struct Raster {
    int width = 0;
    int height = 0;
    int max_value = 255;
    std::vector<std::uint16_t> samples;
};

/// Binary PPM (P6), 8- or 16-bit (big-endian) samples. Throws ParseError on
/// malformed headers and InvalidInput on truncated data.
Raster read_ppm(std::istream& in);

/// One row per tile. Kept as a raw matrix because an image with a single
/// tile is valid input but not a valid PointSet.
struct ImageBlocks {
    int block_size = 8;
    int channels = 3;
    PointMatrix blocks;

    [[nodiscard]] Eigen::Index count() const noexcept { return blocks.rows(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return blocks.cols(); }
    /// Throws InsufficientData when there are fewer than two tiles.
    [[nodiscard]] PointSet to_point_set() const { return PointSet(blocks); }
};

/// Non-overlapping block×block tiles scanned row-major; partial edge tiles are
/// dropped. Each tile becomes one point: pixels row-major, (r, g, b) per pixel,
/// every sample divided by the raster's max value.
ImageBlocks image_to_blocks(const Raster& image, int block = 8);

/// Counter-based generator: output k is SplitMix64's finalizer applied to
/// seed + (k + 1)·0x9E3779B97F4A7C15, i.e. the k-th output of a SplitMix64
/// stream started at `seed`. Any element can be computed independently.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    [[nodiscard]] std::uint64_t bits(std::uint64_t k) const noexcept;

    /// (bits(k) >> 11) · 2⁻⁵³, in [0, 1).
    [[nodiscard]] double uniform(std::uint64_t k) const noexcept;

    /// Box–Muller. Normals 2p and 2p+1 share the uniforms u₁ = 1 − uniform(2p)
    /// and u₂ = uniform(2p+1): r = √(−2 ln u₁); even → r·cos 2πu₂, odd → r·sin 2πu₂.
    [[nodiscard]] double normal(std::uint64_t k) const noexcept;

private:
    std::uint64_t seed_;
};

/// y_i = mean + Σ^{1/2} z_i where z_i holds normals i·N … i·N + N − 1 of CounterRng(seed).
PointSet sample_gaussian(const Vector& mean, const SymMatrix& cov, Eigen::Index n, std::uint64_t seed);

}  // namespace rescale

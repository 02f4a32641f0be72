#include "rescale/ingest.hpp"

#include "rescale/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string_view>

namespace rescale {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    if (field.front() == '+') field.remove_prefix(1);
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string ppm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int ppm_int(std::istream& in, const char* what) {
    const std::string tok = ppm_token(in);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v <= 0)
        throw ParseError(std::string("PPM: invalid ") + what + " '" + tok + "'", 1);
    return v;
}

std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

PointSet read_points_csv(std::istream& in) {
    std::vector<double> values;
    Eigen::Index dim = 0;
    Eigen::Index rows = 0;
    bool seen_first = false;
    std::string line;
    std::size_t line_no = 0;
    double v = 0.0;

    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split(text);

        if (!seen_first) {
            seen_first = true;
            if (!parse_number(fields.front(), v)) continue;  // header
        }
        if (dim == 0) dim = static_cast<Eigen::Index>(fields.size());
        if (static_cast<Eigen::Index>(fields.size()) != dim)
            throw ParseError("expected " + std::to_string(dim) + " columns, found " + std::to_string(fields.size()),
                             line_no);
        for (const auto f : fields) {
            if (!parse_number(f, v)) throw ParseError("not a number: '" + std::string(trim(f)) + "'", line_no);
            values.push_back(v);
        }
        ++rows;
    }
    if (rows < 2) throw InsufficientData("CSV: at least 2 data rows are required, found " + std::to_string(rows));
    return PointSet(Eigen::Map<const PointMatrix>(values.data(), rows, dim));
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

void write_points_csv(std::ostream& out, const PointSet& points) {
    const auto& p = points.points();
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (j) out << ',';
            out << format_double(p(i, j));
        }
        out << '\n';
    }
}

Raster read_ppm(std::istream& in) {
    if (ppm_token(in) != "P6") throw ParseError("PPM: expected binary 'P6' magic", 1);
    Raster r;
    r.width = ppm_int(in, "width");
    r.height = ppm_int(in, "height");
    r.max_value = ppm_int(in, "max value");
    if (r.max_value > 65535) throw ParseError("PPM: max value above 65535", 1);

    const std::size_t count = static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height) * 3;
    const std::size_t bytes_per_sample = r.max_value > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw InvalidInput("PPM: truncated pixel data");

    r.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        r.samples[i] = bytes_per_sample == 1
                           ? raw[i]
                           : static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
    return r;
}

ImageBlocks image_to_blocks(const Raster& image, int block) {
    constexpr int channels = 3;
    if (block < 1) throw InvalidInput("image_to_blocks: block size must be positive");
    if (image.width < block || image.height < block)
        throw InvalidInput("image_to_blocks: image is smaller than one block");
    if (image.samples.size() != static_cast<std::size_t>(image.width) * image.height * channels)
        throw InvalidInput("image_to_blocks: sample count does not match raster size");

    const int across = image.width / block;
    const int down = image.height / block;
    const Eigen::Index dim = static_cast<Eigen::Index>(block) * block * channels;
    const double scale = 1.0 / static_cast<double>(image.max_value);
    PointMatrix out(static_cast<Eigen::Index>(across) * down, dim);

    for (int by = 0; by < down; ++by) {
        for (int bx = 0; bx < across; ++bx) {
            const Eigen::Index row = static_cast<Eigen::Index>(by) * across + bx;
            Eigen::Index col = 0;
            for (int py = 0; py < block; ++py) {
                const std::size_t y = static_cast<std::size_t>(by) * block + py;
                for (int px = 0; px < block; ++px) {
                    const std::size_t x = static_cast<std::size_t>(bx) * block + px;
                    const std::size_t base = (y * image.width + x) * channels;
                    for (int c = 0; c < channels; ++c) out(row, col++) = image.samples[base + c] * scale;
                }
            }
        }
    }
    return {block, channels, std::move(out)};
}

std::uint64_t CounterRng::bits(std::uint64_t k) const noexcept {
    return splitmix_finalize(seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform(std::uint64_t k) const noexcept {
    return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t k) const noexcept {
    const std::uint64_t pair = k / 2;
    const double u1 = 1.0 - uniform(2 * pair);  // (0, 1]
    const double u2 = uniform(2 * pair + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (k % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
}

PointSet sample_gaussian(const Vector& mean, const SymMatrix& cov, Eigen::Index n, std::uint64_t seed) {
    if (n < 2) throw InsufficientData("sample_gaussian: at least 2 samples are required");
    const GaussianModel model(mean, cov);
    const Matrix root = spd_power(model.cov(), 0.5).matrix();
    const Eigen::Index dim = mean.size();
    const CounterRng rng(seed);

    PointMatrix out(n, dim);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector z(dim);
        for (Eigen::Index j = 0; j < dim; ++j) z(j) = rng.normal(static_cast<std::uint64_t>(i * dim + j));
        out.row(i) = (mean + root * z).transpose();
    }
    return PointSet(std::move(out));
}

}  // namespace rescale

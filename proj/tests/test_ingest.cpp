#include "doctest.h"
#include "support.hpp"

#include "rescale/errors.hpp"
#include "rescale/families.hpp"
#include "rescale/ingest.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace rescale;
using testing::vec;

namespace {

PointSet parse(const std::string& text) {
    std::istringstream in(text);
    return read_points_csv(in);
}

std::string ppm(int w, int h, int maxval, const std::vector<int>& samples, const std::string& comment = "") {
    std::string s = "P6\n" + comment + std::to_string(w) + " " + std::to_string(h) + "\n" + std::to_string(maxval) + "\n";
    for (int v : samples) {
        if (maxval > 255) s.push_back(static_cast<char>(v >> 8));
        s.push_back(static_cast<char>(v & 0xff));
    }
    return s;
}

Raster gradient(int w, int h) {
    Raster r;
    r.width = w;
    r.height = h;
    r.max_value = 255;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) r.samples.push_back(static_cast<std::uint16_t>((x * 7 + y * 13 + c * 50) % 256));
    return r;
}

}  // namespace

TEST_CASE("read_points_csv examples") {
    const auto a = parse("0,0\n2,0\n0,2\n2,2");
    CHECK(a.size() == 4);
    CHECK(a.dim() == 2);
    CHECK(a.points()(3, 1) == 2.0);

    const auto b = parse("x,y\n1,2\n3,4\n");
    CHECK(b.size() == 2);
    CHECK(b.points()(0, 0) == 1.0);

    try {
        (void)parse("1,2\n3");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("read_points_csv tolerates comments, blanks, spacing and signs") {
    const auto p = parse("# comment\n\n 1.5 , -2e3\r\n+3,4\n\n");
    CHECK(p.size() == 2);
    CHECK(p.points()(0, 1) == -2000.0);
    CHECK(p.points()(1, 0) == 3.0);
}

TEST_CASE("read_points_csv errors") {
    try {
        (void)parse("1,2\n3,abc\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    try {
        (void)parse("# c\n1,2\n\n3,4,5\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse("1,2\n"), InsufficientData);
    CHECK_THROWS_AS(parse("a,b\n"), InsufficientData);
    CHECK_THROWS_AS(parse(""), InsufficientData);
    CHECK_THROWS_AS(parse("1,\n2,3\n"), ParseError);
    CHECK_THROWS_AS(parse("1,nan\n2,3\n"), ParseError);
}

TEST_CASE("CSV round-trips at full precision") {
    testing::Draw draw(51);
    PointMatrix p(40, 3);
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = draw.normal() * std::pow(10.0, (i % 11) - 5);
    p(0, 0) = 0.1;
    p(0, 1) = -0.0;
    p(0, 2) = std::numeric_limits<double>::denorm_min();
    p(1, 0) = std::numeric_limits<double>::max();
    const PointSet original(p);
    std::ostringstream out;
    write_points_csv(out, original);
    const auto back = parse(out.str());
    REQUIRE(back.size() == original.size());
    CHECK(std::equal(back.points().data(), back.points().data() + p.size(), p.data()));
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("read_ppm") {
    std::istringstream in(ppm(2, 1, 255, {0, 128, 255, 10, 20, 30}, "# made by hand\n"));
    const auto r = read_ppm(in);
    CHECK(r.width == 2);
    CHECK(r.height == 1);
    CHECK(r.max_value == 255);
    CHECK(r.samples == std::vector<std::uint16_t>{0, 128, 255, 10, 20, 30});

    std::istringstream wide(ppm(1, 1, 65535, {65535, 256, 1}));
    const auto w = read_ppm(wide);
    CHECK(w.samples == std::vector<std::uint16_t>{65535, 256, 1});

    std::istringstream p3("P3\n1 1\n255\n1 2 3\n");
    CHECK_THROWS_AS(read_ppm(p3), ParseError);
    std::istringstream truncated(ppm(2, 2, 255, {1, 2, 3}));
    CHECK_THROWS_AS(read_ppm(truncated), InvalidInput);
    std::istringstream bad_max(ppm(1, 1, 0, {0, 0, 0}));
    CHECK_THROWS_AS(read_ppm(bad_max), ParseError);
}

TEST_CASE("image_to_blocks counts and layout") {
    CHECK(image_to_blocks(gradient(16, 8)).count() == 2);
    CHECK(image_to_blocks(gradient(16, 8)).dim() == 192);
    CHECK(image_to_blocks(gradient(8, 8)).count() == 1);
    CHECK(image_to_blocks(gradient(10, 10)).count() == 1);
    CHECK(image_to_blocks(gradient(35, 17)).count() == 4 * 2);
    CHECK_THROWS_AS(image_to_blocks(gradient(7, 20)), InvalidInput);

    const Raster r = gradient(16, 16);
    const auto b = image_to_blocks(r);
    CHECK(b.blocks.minCoeff() >= 0.0);
    CHECK(b.blocks.maxCoeff() <= 1.0);
    // Block 1 is the top-right tile; its entry for pixel (row 2, col 3), channel 1.
    const int x = 8 + 3, y = 2, c = 1;
    const double expected = r.samples[static_cast<std::size_t>((y * 16 + x) * 3 + c)] / 255.0;
    CHECK(b.blocks(1, (2 * 8 + 3) * 3 + 1) == expected);
    // Block 2 starts the second tile row.
    CHECK(b.blocks(2, 0) == r.samples[static_cast<std::size_t>((8 * 16) * 3)] / 255.0);

    const auto twice = image_to_blocks(r);
    CHECK((twice.blocks - b.blocks).norm() == 0.0);
}

TEST_CASE("CounterRng") {
    const CounterRng a(42), b(42), c(43);
    CHECK(a.bits(0) == b.bits(0));
    CHECK(a.bits(0) != c.bits(0));
    CHECK(a.bits(5) != a.bits(6));
    // splitmix64 finalizer of 0x9E3779B97F4A7C15, computed independently in Python.
    CHECK(CounterRng(0).bits(0) == 0xE220A8397B1DCDAFull);
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const double u = a.uniform(k);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(std::isfinite(a.normal(k)));
    }
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t k = 0; k < 100000; ++k) {
        const double z = a.normal(k);
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / 1e5) < 0.02);
    CHECK(std::abs(sq / 1e5 - 1.0) < 0.02);
}

TEST_CASE("sample_gaussian") {
    const Vector m = vec({1, -2});
    const auto s = estimate_moments(sample_gaussian(m, SymMatrix::identity(2), 100000, 3));
    CHECK((s.mean - m).cwiseAbs().maxCoeff() < 0.05);
    CHECK((s.cov.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.05);

    const auto ex1 = testing::example1_moments();
    const PointSet y = sample_gaussian(ex1.mean, ex1.cov, 100000, 7);
    const Moments mom = estimate_moments(y);
    CHECK(fit_full(mom).match == 0.0);
    CHECK(std::abs(fit_fixed_mean(mom, vec({0, 0})).match - 1.680936043938556) < 0.05);

    const PointSet again = sample_gaussian(ex1.mean, ex1.cov, 100000, 7);
    CHECK(std::equal(y.points().data(), y.points().data() + y.points().size(), again.points().data()));

    CHECK_THROWS_AS(sample_gaussian(m, SymMatrix::identity(2), 1, 3), InsufficientData);
    CHECK_THROWS_AS(sample_gaussian(m, testing::sym(2, {1, 1, 1, 1}), 10, 3), SingularMatrix);
}

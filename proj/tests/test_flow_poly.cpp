#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "seawake/errors.hpp"
#include "seawake/flowlab.hpp"

using namespace seawake;
using namespace seawake::flow;

namespace {

// Independent oracle: per-pixel weighted least squares on the basis
// (1, x, y, x^2, y^2, xy), solving the dense 6x6 normal equations by
// Gaussian elimination with the same clamped-border sampling.
PolyExpansion brute_force_expansion(const Frame& f, int poly_n, double sigma) {
    const int n = poly_n / 2;
    auto basis = [](double x, double y) {
        return std::array<double, 6>{1.0, x, y, x * x, y * y, x * y};
    };

    PolyExpansion out;
    out.width = f.width;
    out.height = f.height;
    out.coeff.resize(static_cast<std::size_t>(f.width) * f.height * 6);

    for (int py = 0; py < f.height; ++py) {
        for (int px = 0; px < f.width; ++px) {
            double a[6][7] = {};
            for (int oy = -n; oy <= n; ++oy) {
                for (int ox = -n; ox <= n; ++ox) {
                    const double w = std::exp(-0.5 * (ox * ox + oy * oy) / (sigma * sigma));
                    const int sx = std::clamp(px + ox, 0, f.width - 1);
                    const int sy = std::clamp(py + oy, 0, f.height - 1);
                    const double v = f.at(sx, sy);
                    const auto b = basis(ox, oy);
                    for (int r = 0; r < 6; ++r) {
                        for (int c = 0; c < 6; ++c) a[r][c] += w * b[r] * b[c];
                        a[r][6] += w * b[r] * v;
                    }
                }
            }
            // Gaussian elimination with partial pivoting
            for (int col = 0; col < 6; ++col) {
                int pivot = col;
                for (int r = col + 1; r < 6; ++r)
                    if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
                for (int c = 0; c < 7; ++c) std::swap(a[col][c], a[pivot][c]);
                for (int r = 0; r < 6; ++r) {
                    if (r == col) continue;
                    const double factor = a[r][col] / a[col][col];
                    for (int c = col; c < 7; ++c) a[r][c] -= factor * a[col][c];
                }
            }
            double* coeff = out.at(px, py);
            coeff[0] = a[0][6] / a[0][0];  // c
            coeff[1] = a[1][6] / a[1][1];  // b_x
            coeff[2] = a[2][6] / a[2][2];  // b_y
            coeff[3] = a[3][6] / a[3][3];  // a_xx
            coeff[4] = a[4][6] / a[4][4];  // a_yy
            coeff[5] = a[5][6] / a[5][5];  // a_xy
        }
    }
    return out;
}

}  // namespace

TEST_CASE("constant image expands to its own value") {
    Frame f = Frame::make(32, 24, 1, 0.37);
    const PolyExpansion p = polynomial_expansion(f, 5, 1.1);
    for (int y = 4; y < 20; ++y)
        for (int x = 4; x < 28; ++x) {
            const double* c = p.at(x, y);
            CHECK(c[0] == doctest::Approx(0.37).epsilon(1e-12));
            for (int k = 1; k < 6; ++k) CHECK(std::abs(c[k]) < 1e-12);
        }
}

TEST_CASE("linear ramp expands to its gradient") {
    Frame f = Frame::make(40, 20, 1);
    const double slope = 1.0 / 64.0;
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 40; ++x) f.at(x, y) = slope * x;
    const PolyExpansion p = polynomial_expansion(f, 5, 1.1);
    for (int y = 4; y < 16; ++y)
        for (int x = 4; x < 36; ++x) {
            const double* c = p.at(x, y);
            CHECK(c[1] == doctest::Approx(slope).epsilon(1e-10));
            CHECK(std::abs(c[2]) < 1e-12);
            CHECK(std::abs(c[3]) < 1e-12);
            CHECK(std::abs(c[4]) < 1e-12);
            CHECK(std::abs(c[5]) < 1e-12);
            CHECK(c[0] == doctest::Approx(slope * x).epsilon(1e-10));
        }
}

TEST_CASE("pure quadratic recovers its leading coefficient") {
    // f = (x/q)^2 stays in [0, 1]; the recovered a_xx, rescaled by q^2,
    // must be 1 to within 1e-6 on interior pixels.
    const int w = 32, h = 16;
    const double q = static_cast<double>(w - 1);
    Frame f = Frame::make(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) f.at(x, y) = (x / q) * (x / q);
    const PolyExpansion p = polynomial_expansion(f, 5, 1.1);
    for (int y = 3; y < h - 3; ++y)
        for (int x = 3; x < w - 3; ++x) {
            const double* c = p.at(x, y);
            CHECK(c[3] * q * q == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(std::abs(c[4]) * q * q < 1e-6);
            CHECK(std::abs(c[5]) * q * q < 1e-6);
        }
}

TEST_CASE("separable expansion agrees with the dense least-squares oracle") {
    const Frame f = testfix::smooth_noise(24, 18, 404, 2.0);
    for (const int poly_n : {5, 7}) {
        const double sigma = poly_n == 5 ? 1.1 : 1.5;
        const PolyExpansion fast = polynomial_expansion(f, poly_n, sigma);
        const PolyExpansion oracle = brute_force_expansion(f, poly_n, sigma);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < fast.coeff.size(); ++i)
            max_diff = std::max(max_diff, std::abs(fast.coeff[i] - oracle.coeff[i]));
        CHECK(max_diff < 1e-9);
    }
}

TEST_CASE("polynomial_expansion validates its inputs") {
    const Frame f = Frame::make(16, 16, 1, 0.5);
    CHECK_THROWS_AS(polynomial_expansion(f, 4, 1.1), Error);
    CHECK_THROWS_AS(polynomial_expansion(f, 5, 0.0), Error);
    CHECK_THROWS_AS(polynomial_expansion(Frame::make(8, 8, 3, 0.2), 5, 1.1), Error);
}

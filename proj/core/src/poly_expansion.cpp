#include <cmath>
#include <string>
#include <vector>

#include "seawake/errors.hpp"
#include "seawake/flowlab.hpp"
#include "seawake/parallel.hpp"

namespace seawake::flow {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "flowlab: " + msg);
}

inline int clamp_int(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

// The quadratic basis (1, x, y, x^2, y^2, xy) under a separable symmetric
// Gaussian applicability has a sparse Gram matrix, so the normal equations
// decouple into closed forms:
//   b_x = <w x f> / s2          a_xx = (<w x^2 f> - s2 <w f>) / (s4 - s2^2)
//   b_y = <w y f> / s2          a_yy = (<w y^2 f> - s2 <w f>) / (s4 - s2^2)
//   a_xy = <w xy f> / s2^2      c    = <w f> - s2 (a_xx + a_yy)
// where s2 = sum w t^2 and s4 = sum w t^4 of the normalized 1-D kernel.
// The six projections <w ... f> come from separable correlations with the
// kernels {g, t g, t^2 g}.
PolyExpansion polynomial_expansion(const Frame& luma, int poly_n, double poly_sigma) {
    if (luma.channels != 1) fail(ErrorCode::contract, "polynomial expansion expects a luma frame");
    if (poly_n < 3 || poly_n % 2 == 0) fail(ErrorCode::contract, "poly_n must be odd and >= 3");
    if (!(poly_sigma > 0.0)) fail(ErrorCode::contract, "poly_sigma must be > 0");

    const int n = poly_n / 2;
    const int taps = 2 * n + 1;
    std::vector<double> g(taps), tg(taps), t2g(taps);
    double sum = 0.0;
    for (int t = -n; t <= n; ++t) sum += std::exp(-0.5 * t * t / (poly_sigma * poly_sigma));
    double s2 = 0.0, s4 = 0.0;
    for (int t = -n; t <= n; ++t) {
        const double w = std::exp(-0.5 * t * t / (poly_sigma * poly_sigma)) / sum;
        g[t + n] = w;
        tg[t + n] = t * w;
        t2g[t + n] = static_cast<double>(t) * t * w;
        s2 += static_cast<double>(t) * t * w;
        s4 += static_cast<double>(t) * t * t * t * w;
    }
    const double denom_a = s4 - s2 * s2;

    const int w = luma.width, h = luma.height;
    // Row correlations of f with g, t g, t^2 g.
    std::vector<double> r0(static_cast<std::size_t>(w) * h);
    std::vector<double> r1(static_cast<std::size_t>(w) * h);
    std::vector<double> r2(static_cast<std::size_t>(w) * h);
    parallel_for(0, h, [&](int y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double a0 = 0.0, a1 = 0.0, a2 = 0.0;
            for (int t = -n; t <= n; ++t) {
                const double v = luma.at(clamp_int(x + t, 0, w - 1), y);
                a0 += g[t + n] * v;
                a1 += tg[t + n] * v;
                a2 += t2g[t + n] * v;
            }
            r0[row + x] = a0;
            r1[row + x] = a1;
            r2[row + x] = a2;
        }
    });

    PolyExpansion out;
    out.width = w;
    out.height = h;
    out.coeff.resize(static_cast<std::size_t>(w) * h * 6);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            double m1 = 0.0, mx = 0.0, my = 0.0, mx2 = 0.0, my2 = 0.0, mxy = 0.0;
            for (int t = -n; t <= n; ++t) {
                const std::size_t row = static_cast<std::size_t>(clamp_int(y + t, 0, h - 1)) * w + x;
                m1 += g[t + n] * r0[row];
                mx += g[t + n] * r1[row];
                my += tg[t + n] * r0[row];
                mx2 += g[t + n] * r2[row];
                my2 += t2g[t + n] * r0[row];
                mxy += tg[t + n] * r1[row];
            }
            const double a_xx = (mx2 - s2 * m1) / denom_a;
            const double a_yy = (my2 - s2 * m1) / denom_a;
            double* coeff = out.at(x, y);
            coeff[0] = m1 - s2 * (a_xx + a_yy);  // c
            coeff[1] = mx / s2;                  // b_x
            coeff[2] = my / s2;                  // b_y
            coeff[3] = a_xx;
            coeff[4] = a_yy;
            coeff[5] = mxy / (s2 * s2);          // a_xy
        }
    });
    return out;
}

}  // namespace seawake::flow

#ifndef DCC_TRANSFORM_HPP
#define DCC_TRANSFORM_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "dcc/error.hpp"

namespace dcc {

// 4x4 integer transform with the {1,2} butterfly basis. Rows of C are
// orthogonal with squared norms (4,10,4,10), so C^-1 = C^T * D^-1 and the
// inverse can be evaluated exactly in integers scaled by 400. For any integer
// input block the forward/inverse pair is the identity, which is what makes
// QP=0 coding lossless.
using CoeffBlock = std::array<std::int32_t, 16>;

namespace detail {
inline constexpr std::int32_t kC[4][4] = {
    {1, 1, 1, 1}, {2, 1, -1, -2}, {1, -1, -1, 1}, {1, -2, 2, -1}};
// 400 / (d_i * d_j) with d = (4,10,4,10)
inline constexpr std::int32_t kInvScale[4][4] = {
    {25, 10, 25, 10}, {10, 4, 10, 4}, {25, 10, 25, 10}, {10, 4, 10, 4}};
} // namespace detail

// Y = C * X * C^T
inline CoeffBlock forward_transform(const CoeffBlock& x) {
    using namespace detail;
    std::int32_t t[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::int32_t s = 0;
            for (int k = 0; k < 4; ++k) s += kC[i][k] * x[static_cast<std::size_t>(k) * 4 + j];
            t[i][j] = s;
        }
    CoeffBlock y{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::int32_t s = 0;
            for (int k = 0; k < 4; ++k) s += t[i][k] * kC[j][k];
            y[static_cast<std::size_t>(i) * 4 + j] = s;
        }
    return y;
}

// X = C^T * (D^-1 Y D^-1) * C, computed as (C^T * (Y .* 400/(d_i d_j)) * C)/400
// with round-half-away division. Exact (no rounding) when Y is a forward
// output.
inline CoeffBlock inverse_transform(const CoeffBlock& y) {
    using namespace detail;
    std::int64_t w[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            w[i][j] = static_cast<std::int64_t>(y[static_cast<std::size_t>(i) * 4 + j]) *
                      kInvScale[i][j];
    std::int64_t t[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::int64_t s = 0;
            for (int k = 0; k < 4; ++k) s += kC[k][i] * w[k][j];
            t[i][j] = s;
        }
    CoeffBlock x{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::int64_t s = 0;
            for (int k = 0; k < 4; ++k) s += t[i][k] * kC[k][j];
            const std::int64_t r = s >= 0 ? (s + 200) / 400 : -((-s + 200) / 400);
            x[static_cast<std::size_t>(i) * 4 + j] = static_cast<std::int32_t>(r);
        }
    return x;
}

inline constexpr int kQpMax = 40;

// Quantizer step doubles every 6 indices; step(0)=1 keeps QP 0 lossless.
inline int quant_step(int qp) {
    if (qp < 0 || qp > kQpMax) throw InvalidArgument("qp out of [0,40]");
    return static_cast<int>(std::lround(std::pow(2.0, qp / 6.0)));
}

// Round-to-nearest of c/step, ties away from zero.
inline std::int32_t quantize_coeff(std::int32_t c, int step) {
    if (step == 1) return c;
    const std::int32_t a = c >= 0 ? c : -c;
    const std::int32_t q = (a + step / 2) / step;
    return c >= 0 ? q : -q;
}

inline CoeffBlock quantize(const CoeffBlock& c, int qp) {
    const int step = quant_step(qp);
    CoeffBlock out{};
    for (std::size_t i = 0; i < 16; ++i) out[i] = quantize_coeff(c[i], step);
    return out;
}

inline CoeffBlock dequantize(const CoeffBlock& levels, int qp) {
    const int step = quant_step(qp);
    CoeffBlock out{};
    for (std::size_t i = 0; i < 16; ++i) out[i] = levels[i] * step;
    return out;
}

// 4x4 zigzag scan order over row-major indices.
inline constexpr std::array<std::uint8_t, 16> kZigzag = {
    0, 1, 4, 8, 5, 2, 3, 6, 9, 12, 13, 10, 7, 11, 14, 15};

} // namespace dcc

#endif // DCC_TRANSFORM_HPP

// SPDX-License-Identifier: Apache-2.0
#include "thz/rng.hpp"

#include <cmath>
#include <cstdlib>

namespace thz::sim {

namespace {

// Marsaglia-Tsang 128-layer ziggurat tables for the standard normal.
struct ZigguratTables {
    std::uint32_t kn[128];
    double wn[128];
    double fn[128];

    ZigguratTables() {
        const double m1 = 2147483648.0;
        double dn = 3.442619855899, tn = dn;
        const double vn = 9.91256303526217e-3;
        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigguratTables kZig;
constexpr double kZigR = 3.442619855899;

} // namespace

double Xoshiro256pp::normal() {
    for (;;) {
        const std::int32_t hz = static_cast<std::int32_t>(next32());
        const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
        const std::uint32_t mag =
            hz < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(hz))
                   : static_cast<std::uint32_t>(hz);
        if (mag < kZig.kn[iz]) return hz * kZig.wn[iz];

        if (iz == 0) {
            // base strip: sample the exponential tail beyond r
            double x, y;
            do {
                x = -std::log(uniform()) / kZigR;
                y = -std::log(uniform());
            } while (y + y < x * x);
            return hz > 0 ? kZigR + x : -kZigR - x;
        }
        const double x = hz * kZig.wn[iz];
        if (kZig.fn[iz] + uniform() * (kZig.fn[iz - 1] - kZig.fn[iz]) <
            std::exp(-0.5 * x * x))
            return x;
    }
}

} // namespace thz::sim

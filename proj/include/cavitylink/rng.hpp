// SPDX-License-Identifier: Apache-2.0
//
// cavitylink - statistical characterization of MIMO channels in mode-stirred enclosures
// Copyright (C) 2026 cavitylink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CAVITYLINK_RNG_HPP
#define CAVITYLINK_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace cavitylink
{
    // Deterministic, platform-independent random stream (splitmix64 core with
    // Box-Muller Gaussians). std::normal_distribution is implementation-defined,
    // so synthesized campaigns would not be reproducible across standard
    // libraries; this generator produces identical bits everywhere.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : state_(seed) {}

        // splitmix64 output function, also used as the seed-mixing primitive
        static std::uint64_t mix(std::uint64_t z)
        {
            z += 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        // Derives an independent stream seed from a tuple of integers, e.g.
        // (campaign seed, cone count, stirrer index, rx, tx). Chained mixing
        // keeps distinct tuples on distinct streams.
        static std::uint64_t derive(std::initializer_list<std::uint64_t> parts)
        {
            std::uint64_t h = 0x6c62272e07bb0142ULL;
            for (std::uint64_t p : parts)
                h = mix(h ^ mix(p));
            return h;
        }

        std::uint64_t next_u64()
        {
            state_ += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = state_;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        // Uniform on (0,1]; never returns 0 so log() is safe.
        double next_unit_positive()
        {
            return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        }

        // Uniform on [0,1).
        double next_unit()
        {
            return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        }

        // One Box-Muller pair of independent standard normals.
        std::array<double, 2> next_gaussian_pair()
        {
            const double u1 = next_unit_positive();
            const double u2 = next_unit();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double phi = 2.0 * M_PI * u2;
            return {r * std::cos(phi), r * std::sin(phi)};
        }

        double next_gaussian() { return next_gaussian_pair()[0]; }

        // Circularly symmetric complex Gaussian with E[|g|^2] = variance.
        std::complex<double> next_complex_gaussian(double variance)
        {
            const auto z = next_gaussian_pair();
            const double s = std::sqrt(variance * 0.5);
            return {s * z[0], s * z[1]};
        }

    private:
        std::uint64_t state_;
    };

} // namespace cavitylink

#endif

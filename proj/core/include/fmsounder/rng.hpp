// SPDX-License-Identifier: Apache-2.0
//
// fmsounder  FM-band channel sounding simulation and PDP modeling toolkit
// Copyright (C) 2026 The fmsounder authors
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

#ifndef fmsounder_rng_H
#define fmsounder_rng_H

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace fmsounder
{

    // Seedable random stream with a fully pinned algorithm so captures are
    // bit-reproducible across platforms:
    //   - engine: std::mt19937_64 (exactly specified by the C++ standard)
    //   - uniform [0,1): top 53 bits, (x >> 11) * 2^-53
    //   - standard normal: Box-Muller on (1-u1, u2), pairs drawn in order
    // std::normal_distribution and friends are implementation-defined and
    // must not be used where output files depend on the stream.
    class Rng
    {
      public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        double uniform01()
        {
            return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }

        // Phase in [0, 2*pi).
        double phase()
        {
            return 2.0 * std::numbers::pi * uniform01();
        }

        // One standard-normal pair; both values are always consumed.
        std::pair<double, double> normal_pair()
        {
            const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
            const double u2 = uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * std::numbers::pi * u2;
            return {r * std::cos(a), r * std::sin(a)};
        }

        // Circularly-symmetric complex Gaussian, E|z|^2 = 1.
        std::complex<double> complex_normal()
        {
            const auto [z0, z1] = normal_pair();
            return {z0 * std::numbers::sqrt2 / 2.0, z1 * std::numbers::sqrt2 / 2.0};
        }

      private:
        std::mt19937_64 engine_;
    };

} // namespace fmsounder

#endif

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

#ifndef CAVITYLINK_TEST_HELPERS_HPP
#define CAVITYLINK_TEST_HELPERS_HPP

#include "cavitylink/cavity.hpp"
#include "cavitylink/channel.hpp"
#include "cavitylink/rng.hpp"

#include <filesystem>
#include <functional>
#include <string>

namespace testutil
{
    using namespace cavitylink;

    // the reference sweep grid: 5.50-5.70 GHz, 501 points
    inline FrequencyGrid table_grid() { return {5.50e9, 5.70e9, 501}; }

    inline ConditionTag condition(int stirrer = 0, int cones = 0)
    {
        ConditionTag c;
        c.stirrer_index = stirrer;
        c.n_cones = cones;
        c.d_link_m = 0.30;
        c.d_tx_m = 0.05;
        c.d_rx_m = 0.05;
        return c;
    }

    // sweep whose matrix is identical at every frequency
    inline SweepRecord constant_sweep(const FrequencyGrid &grid, const ChannelMatrix &m,
                                      ConditionTag tag = condition())
    {
        SweepRecord rec;
        rec.grid = grid;
        rec.condition = tag;
        rec.matrices.assign(static_cast<std::size_t>(grid.n_points), m);
        return rec;
    }

    // 1x1 sweep built from per-frequency scalar values
    inline SweepRecord scalar_sweep(const FrequencyGrid &grid,
                                    const std::function<Complex(double)> &h_of_f,
                                    ConditionTag tag = condition())
    {
        SweepRecord rec;
        rec.grid = grid;
        rec.condition = tag;
        rec.matrices.reserve(static_cast<std::size_t>(grid.n_points));
        for (int k = 0; k < grid.n_points; ++k)
        {
            ChannelMatrix m(1, 1);
            m(0, 0) = h_of_f(grid.frequency_hz(k));
            rec.matrices.push_back(std::move(m));
        }
        return rec;
    }

    // small random campaign for round-trip / property tests
    inline Campaign random_campaign(std::uint64_t seed, int n_records = 3, int n_points = 7,
                                    int n_rx = 2, int n_tx = 2)
    {
        Rng rng(seed);
        Campaign campaign;
        const FrequencyGrid grid{1.0e9, 1.2e9, n_points};
        for (int r = 0; r < n_records; ++r)
        {
            SweepRecord rec;
            rec.grid = grid;
            rec.condition = condition(r, 2 * (r % 3));
            for (int k = 0; k < n_points; ++k)
            {
                ChannelMatrix m(n_rx, n_tx);
                for (int i = 0; i < n_rx; ++i)
                    for (int j = 0; j < n_tx; ++j)
                        m(i, j) = rng.next_complex_gaussian(1.0) * (1.0 + rng.next_unit());
                rec.matrices.push_back(std::move(m));
            }
            campaign.records.push_back(std::move(rec));
        }
        campaign.metadata["instrument"] = "synthetic";
        return campaign;
    }

    // unique scratch directory under the system temp root
    inline std::filesystem::path scratch_dir(const std::string &name)
    {
        const std::filesystem::path dir =
            std::filesystem::temp_directory_path() / ("cavitylink_test_" + name);
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

} // namespace testutil

#endif

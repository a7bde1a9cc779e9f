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

#ifndef CAVITYLINK_CHANNEL_HPP
#define CAVITYLINK_CHANNEL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavitylink
{
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s

    using Complex = std::complex<double>;

    // n_rx x n_tx complex path gains at one frequency; rows are receive antennas
    using ChannelMatrix = Eigen::MatrixXcd;

    // Uniform frequency grid, endpoints inclusive.
    struct FrequencyGrid
    {
        double f_start_hz = 0.0;
        double f_stop_hz = 0.0;
        int n_points = 0;

        double bandwidth_hz() const { return f_stop_hz - f_start_hz; }
        double spacing_hz() const { return bandwidth_hz() / (n_points - 1); }
        double frequency_hz(int i) const { return f_start_hz + spacing_hz() * i; }

        // Fourier-limit delay resolution of a sweep over this grid
        double delay_resolution_s() const { return 1.0 / bandwidth_hz(); }

        friend bool operator==(const FrequencyGrid &, const FrequencyGrid &) = default;

        void require_valid() const
        {
            if (n_points < 2)
                throw std::invalid_argument("FrequencyGrid: n_points must be >= 2");
            if (!(f_start_hz >= 0.0) || !(f_stop_hz > f_start_hz))
                throw std::invalid_argument("FrequencyGrid: need f_stop > f_start >= 0");
        }
    };

    // One measurement condition: stirrer paddle position, absorber loading and
    // link geometry. The tuple must be unique within a campaign.
    struct ConditionTag
    {
        int stirrer_index = 0;
        int n_cones = 0;     // absorber loading
        double d_link_m = 0; // Tx-Rx separation D
        double d_tx_m = 0;   // transmit inter-element spacing d_t
        double d_rx_m = 0;   // receive inter-element spacing d_r

        friend bool operator==(const ConditionTag &, const ConditionTag &) = default;
    };

    // Full-band complex channel transfer matrices on a frequency grid for one
    // measurement condition. matrices[k] corresponds to grid.frequency_hz(k).
    struct SweepRecord
    {
        FrequencyGrid grid;
        std::vector<ChannelMatrix> matrices;
        ConditionTag condition;

        int n_rx() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
        int n_tx() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().cols()); }
    };

    // Indexed collection of sweeps over stirrer positions, loadings and geometries.
    struct Campaign
    {
        std::vector<SweepRecord> records;
        std::map<std::string, std::string> metadata;
    };

    // A single invariant violation found by validate_campaign. record_index is
    // -1 for campaign-level problems.
    struct Violation
    {
        int record_index = -1;
        std::string message;
    };

    namespace detail
    {
        // Compensated accumulation; keeps large-campaign power sums accurate
        // enough for the 1e-12 normalization idempotence contract.
        struct KahanSum
        {
            double sum = 0.0;
            double carry = 0.0;
            void add(double x)
            {
                const double y = x - carry;
                const double t = sum + y;
                carry = (t - sum) - y;
                sum = t;
            }
        };
    } // namespace detail

    // Checks every type invariant and returns one entry per violation; an empty
    // result means the campaign is well formed. Never throws on bad data.
    inline std::vector<Violation> validate_campaign(const Campaign &campaign)
    {
        std::vector<Violation> out;
        const auto add = [&out](int rec, std::string msg) { out.push_back({rec, std::move(msg)}); };

        for (int r = 0; r < static_cast<int>(campaign.records.size()); ++r)
        {
            const SweepRecord &rec = campaign.records[r];
            const FrequencyGrid &g = rec.grid;

            if (g.n_points < 2)
                add(r, "grid has fewer than 2 points");
            if (!(g.f_start_hz >= 0.0) || !(g.f_stop_hz > g.f_start_hz))
                add(r, "grid frequencies must satisfy f_stop > f_start >= 0");
            if (static_cast<int>(rec.matrices.size()) != g.n_points)
                add(r, "matrix count " + std::to_string(rec.matrices.size()) +
                           " does not equal grid n_points " + std::to_string(g.n_points));

            if (!rec.matrices.empty())
            {
                const auto rows = rec.matrices.front().rows();
                const auto cols = rec.matrices.front().cols();
                if (rows < 1 || cols < 1)
                    add(r, "channel matrices must be at least 1x1");
                bool shape_ok = true;
                bool finite_ok = true;
                for (const ChannelMatrix &m : rec.matrices)
                {
                    if (m.rows() != rows || m.cols() != cols)
                        shape_ok = false;
                    else if (!m.allFinite())
                        finite_ok = false;
                }
                if (!shape_ok)
                    add(r, "matrices do not share identical n_rx, n_tx");
                if (!finite_ok)
                    add(r, "matrix entries contain non-finite values");
            }

            const ConditionTag &c = rec.condition;
            if (c.stirrer_index < 0)
                add(r, "stirrer_index must be >= 0");
            if (c.n_cones < 0)
                add(r, "n_cones must be >= 0");
            if (!(c.d_link_m > 0.0) || !(c.d_tx_m > 0.0) || !(c.d_rx_m > 0.0))
                add(r, "all condition distances must be > 0");

            if (r > 0 && !(g == campaign.records.front().grid))
                add(r, "grid differs from record 0");
        }

        for (std::size_t a = 0; a < campaign.records.size(); ++a)
            for (std::size_t b = a + 1; b < campaign.records.size(); ++b)
                if (campaign.records[a].condition == campaign.records[b].condition)
                    add(static_cast<int>(b),
                        "condition tuple duplicates record " + std::to_string(a));

        return out;
    }

    // Mean of |H_ij|^2 over all records, frequencies and matrix entries.
    inline double mean_square_gain(const Campaign &campaign)
    {
        detail::KahanSum acc;
        std::size_t count = 0;
        for (const SweepRecord &rec : campaign.records)
            for (const ChannelMatrix &m : rec.matrices)
            {
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    for (Eigen::Index i = 0; i < m.rows(); ++i)
                        acc.add(std::norm(m(i, j)));
                count += static_cast<std::size_t>(m.size());
            }
        if (count == 0)
            throw std::invalid_argument("mean_square_gain: campaign has no entries");
        return acc.sum / static_cast<double>(count);
    }

    // Rescales every entry by one global real constant so that the campaign-wide
    // mean of |H_ij|^2 becomes 1. Phases and inter-subchannel ratios are
    // preserved exactly; the SNR rho of the capacity formulas then reads as SNR
    // per receive antenna independent of absolute path loss.
    inline Campaign normalize_campaign(const Campaign &campaign)
    {
        const double msg = mean_square_gain(campaign);
        if (!(msg > 0.0) || !std::isfinite(msg))
            throw std::invalid_argument("normalize_campaign: campaign power is zero or non-finite");
        const double c = 1.0 / std::sqrt(msg);

        Campaign out = campaign;
        for (SweepRecord &rec : out.records)
            for (ChannelMatrix &m : rec.matrices)
                m *= c;
        return out;
    }

    // Assembles a full n_tx=2 MIMO sweep from the two phases of the virtual
    // MIMO procedure: phase 1 measured with transmit antenna 1 active, phase 2
    // with transmit antenna 2 active. Column 1 of the output comes from phase 1
    // and column 2 from phase 2, at every frequency.
    inline SweepRecord assemble_virtual_mimo(const SweepRecord &phase1, const SweepRecord &phase2)
    {
        if (phase1.n_tx() != 1 || phase2.n_tx() != 1)
            throw std::invalid_argument("assemble_virtual_mimo: both phases must have n_tx == 1");
        if (!(phase1.grid == phase2.grid))
            throw std::invalid_argument("assemble_virtual_mimo: frequency grids differ");
        if (phase1.n_rx() != phase2.n_rx())
            throw std::invalid_argument("assemble_virtual_mimo: receive antenna counts differ");
        if (!(phase1.condition == phase2.condition))
            throw std::invalid_argument("assemble_virtual_mimo: measurement conditions differ");

        SweepRecord out;
        out.grid = phase1.grid;
        out.condition = phase1.condition;
        out.matrices.reserve(phase1.matrices.size());
        for (std::size_t k = 0; k < phase1.matrices.size(); ++k)
        {
            ChannelMatrix m(phase1.n_rx(), 2);
            m.col(0) = phase1.matrices[k].col(0);
            m.col(1) = phase2.matrices[k].col(0);
            out.matrices.push_back(std::move(m));
        }
        return out;
    }

} // namespace cavitylink

#endif

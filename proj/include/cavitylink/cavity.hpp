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

#ifndef CAVITYLINK_CAVITY_HPP
#define CAVITYLINK_CAVITY_HPP

#include "cavitylink/channel.hpp"
#include "cavitylink/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cavitylink
{
    // Ground truth for the synthetic mode-stirred enclosure.
    //
    // The channel is a tapped delay line: a dense comb of scattered taps whose
    // variance decays exponentially with the loading-dependent reverberation
    // time tau_c(n_cones) = tau0 / (1 + beta * n_cones), plus an optional
    // deterministic direct tap with free-space amplitude scaling. Each stirrer
    // position is an independent realization of the scattered gains.
    //
    // Defaults reproduce the reference measurement shape: 5.50-5.70 GHz sweep,
    // 501 points, 2x2 link, ten stirrer positions, loadings {0, 2, 4, 8} cones.
    struct CavityConfig
    {
        FrequencyGrid grid{5.50e9, 5.70e9, 501};
        int n_rx = 2;
        int n_tx = 2;
        int n_stirrer = 10;
        std::vector<int> cone_levels{0, 2, 4, 8};

        double tau0_s = 400e-9;  // decay constant of the empty enclosure
        double beta = 0.35;      // loading sensitivity per cone
        double k_target = 0.0;   // direct-to-scattered power ratio knob (0 = NLOS)
        int n_taps = 400;        // scattered tap count
        double tap_spacing_s = 5e-9;

        double d_link_m = 0.30;
        double d_tx_m = 0.05;
        double d_rx_m = 0.05;
        double wavelength_m = kSpeedOfLight / 5.6e9;

        std::uint64_t seed = 0x5eedcafeULL;

        // Additive complex Gaussian floor in dB relative to the mean channel
        // power of the subchannel; disabled when unset.
        std::optional<double> noise_floor_db;

        double decay_constant_s(int n_cones) const { return tau0_s / (1.0 + beta * n_cones); }

        void require_valid() const
        {
            grid.require_valid();
            if (n_rx < 1 || n_tx < 1)
                throw std::invalid_argument("CavityConfig: antenna counts must be >= 1");
            if (n_stirrer < 1)
                throw std::invalid_argument("CavityConfig: n_stirrer must be >= 1");
            if (cone_levels.empty())
                throw std::invalid_argument("CavityConfig: cone_levels must not be empty");
            for (int n : cone_levels)
                if (n < 0)
                    throw std::invalid_argument("CavityConfig: cone levels must be >= 0");
            if (!(tau0_s > 0.0))
                throw std::invalid_argument("CavityConfig: tau0_s must be > 0");
            if (beta < 0.0)
                throw std::invalid_argument("CavityConfig: beta must be >= 0");
            if (k_target < 0.0)
                throw std::invalid_argument("CavityConfig: k_target must be >= 0");
            if (n_taps < 1)
                throw std::invalid_argument("CavityConfig: n_taps must be >= 1");
            if (!(tap_spacing_s > 0.0))
                throw std::invalid_argument("CavityConfig: tap_spacing_s must be > 0");
            if (!(d_link_m > 0.0) || !(d_tx_m > 0.0) || !(d_rx_m > 0.0))
                throw std::invalid_argument("CavityConfig: distances must be > 0");
            if (!(wavelength_m > 0.0))
                throw std::invalid_argument("CavityConfig: wavelength_m must be > 0");
            for (int n : cone_levels)
                if (!(decay_constant_s(n) > 0.0))
                    throw std::invalid_argument("CavityConfig: decay constant not positive");
        }
    };

    // Discrete multipath representation of one subchannel realization.
    // delays_s holds the scattered tap delays (strictly increasing, first entry
    // is the line-of-sight delay d_link/c); los_gain sits at delays_s[0].
    struct TapSet
    {
        std::vector<double> delays_s;
        std::vector<Complex> gains;
        Complex los_gain{0.0, 0.0};
    };

    // Timing bookkeeping of the stepped frequency sweep.
    struct SweepSchedule
    {
        int n_points = 0;
        double dwell_per_point_s = 0.0;
        int snapshots_per_point = 0;
        int samples_per_snapshot = 0;
        double total_sweep_time_s = 0.0;
    };

    namespace detail
    {
        inline void require_condition_indices(const CavityConfig &config, int n_cones, int stirrer_index)
        {
            if (std::find(config.cone_levels.begin(), config.cone_levels.end(), n_cones) ==
                config.cone_levels.end())
                throw std::invalid_argument("cone level " + std::to_string(n_cones) +
                                            " is not configured");
            if (stirrer_index < 0 || stirrer_index >= config.n_stirrer)
                throw std::invalid_argument("stirrer_index out of range");
        }
    } // namespace detail

    // Draws the tapped-delay-line realization for one subchannel. The stream is
    // seeded by (seed, n_cones, stirrer_index, rx, tx), so any subchannel can be
    // regenerated in isolation and in any order.
    //
    // Scattered tap k has variance exp(-k*tap_spacing/tau_c) relative to the
    // first tap; the direct tap carries power k_target * P_s further scaled by
    // the free-space amplitude wavelength/(4*pi*d_link) and the propagation
    // phase -2*pi*d_link/wavelength.
    inline TapSet synth_taps(const CavityConfig &config, int n_cones, int stirrer_index,
                             int rx, int tx)
    {
        detail::require_condition_indices(config, n_cones, stirrer_index);
        if (rx < 0 || rx >= config.n_rx || tx < 0 || tx >= config.n_tx)
            throw std::invalid_argument("synth_taps: subchannel index out of range");

        const double tau_c = config.decay_constant_s(n_cones);
        const double tau_los = config.d_link_m / kSpeedOfLight;

        Rng rng(Rng::derive({config.seed, static_cast<std::uint64_t>(n_cones),
                             static_cast<std::uint64_t>(stirrer_index),
                             static_cast<std::uint64_t>(rx), static_cast<std::uint64_t>(tx)}));

        TapSet taps;
        taps.delays_s.resize(config.n_taps);
        taps.gains.resize(config.n_taps);

        double scattered_power = 0.0;
        for (int k = 0; k < config.n_taps; ++k)
        {
            taps.delays_s[k] = tau_los + k * config.tap_spacing_s;
            const double variance = std::exp(-(k * config.tap_spacing_s) / tau_c);
            scattered_power += variance;
            taps.gains[k] = rng.next_complex_gaussian(variance);
        }

        if (config.k_target > 0.0)
        {
            const double magnitude = std::sqrt(config.k_target * scattered_power) *
                                     config.wavelength_m / (4.0 * M_PI * config.d_link_m);
            const double phase = -2.0 * M_PI * config.d_link_m / config.wavelength_m;
            taps.los_gain = std::polar(magnitude, phase);
        }
        return taps;
    }

    // Frequency response of an explicit tap set on a grid:
    //   H(f) = sum_k g_k exp(-j 2 pi f tau_k) + g_los exp(-j 2 pi f tau_los).
    // Evaluated with a per-tap phasor recurrence (one trig call per tap).
    inline std::vector<Complex> evaluate_taps(const FrequencyGrid &grid, const TapSet &taps)
    {
        grid.require_valid();
        if (taps.delays_s.size() != taps.gains.size() || taps.delays_s.empty())
            throw std::invalid_argument("evaluate_taps: delays and gains must be nonempty and equal length");

        std::vector<Complex> h(static_cast<std::size_t>(grid.n_points), Complex{0.0, 0.0});
        const double df = grid.spacing_hz();
        for (std::size_t k = 0; k < taps.delays_s.size(); ++k)
        {
            Complex g = taps.gains[k];
            if (k == 0)
                g += taps.los_gain;
            if (g == Complex{0.0, 0.0})
                continue;
            const double tau = taps.delays_s[k];
            Complex p = std::polar(1.0, -2.0 * M_PI * grid.f_start_hz * tau);
            const Complex w = std::polar(1.0, -2.0 * M_PI * df * tau);
            for (int i = 0; i < grid.n_points; ++i)
            {
                h[static_cast<std::size_t>(i)] += g * p;
                p *= w;
            }
        }
        return h;
    }

    namespace detail
    {
        inline std::vector<Complex> synth_subchannel(const CavityConfig &config, int n_cones,
                                                     int stirrer_index, int rx, int tx)
        {
            const TapSet taps = synth_taps(config, n_cones, stirrer_index, rx, tx);
            std::vector<Complex> h = evaluate_taps(config.grid, taps);

            if (config.noise_floor_db)
            {
                // Reference power is the ensemble mean channel power of this
                // subchannel, P_s + P_d, not the realized one, so the floor is
                // identical across stirrer positions.
                const double tau_c = config.decay_constant_s(n_cones);
                double p_s = 0.0;
                for (int k = 0; k < config.n_taps; ++k)
                    p_s += std::exp(-(k * config.tap_spacing_s) / tau_c);
                const double p_d = std::norm(taps.los_gain);
                const double noise_var =
                    (p_s + p_d) * std::pow(10.0, *config.noise_floor_db / 10.0);

                Rng noise_rng(Rng::derive({config.seed, 0xA05EULL,
                                           static_cast<std::uint64_t>(n_cones),
                                           static_cast<std::uint64_t>(stirrer_index),
                                           static_cast<std::uint64_t>(rx),
                                           static_cast<std::uint64_t>(tx)}));
                for (Complex &v : h)
                    v += noise_rng.next_complex_gaussian(noise_var);
            }
            return h;
        }

        inline ConditionTag condition_from(const CavityConfig &config, int n_cones, int stirrer_index)
        {
            ConditionTag c;
            c.stirrer_index = stirrer_index;
            c.n_cones = n_cones;
            c.d_link_m = config.d_link_m;
            c.d_tx_m = config.d_tx_m;
            c.d_rx_m = config.d_rx_m;
            return c;
        }
    } // namespace detail

    // One phase of the virtual-MIMO procedure: the n_tx=1 sweep measured with
    // only transmit antenna tx active. Uses the same per-subchannel streams as
    // synth_sweep, so assembling phases reproduces the full sweep exactly.
    inline SweepRecord synth_phase(const CavityConfig &config, int n_cones, int stirrer_index, int tx)
    {
        config.require_valid();
        if (tx < 0 || tx >= config.n_tx)
            throw std::invalid_argument("synth_phase: tx out of range");
        detail::require_condition_indices(config, n_cones, stirrer_index);

        SweepRecord rec;
        rec.grid = config.grid;
        rec.condition = detail::condition_from(config, n_cones, stirrer_index);
        rec.matrices.assign(static_cast<std::size_t>(config.grid.n_points),
                            ChannelMatrix::Zero(config.n_rx, 1));
        for (int rx = 0; rx < config.n_rx; ++rx)
        {
            const auto h = detail::synth_subchannel(config, n_cones, stirrer_index, rx, tx);
            for (int i = 0; i < config.grid.n_points; ++i)
                rec.matrices[static_cast<std::size_t>(i)](rx, 0) = h[static_cast<std::size_t>(i)];
        }
        return rec;
    }

    // Full n_rx x n_tx sweep for one (loading, stirrer position) condition.
    inline SweepRecord synth_sweep(const CavityConfig &config, int n_cones, int stirrer_index)
    {
        config.require_valid();
        detail::require_condition_indices(config, n_cones, stirrer_index);

        SweepRecord rec;
        rec.grid = config.grid;
        rec.condition = detail::condition_from(config, n_cones, stirrer_index);
        rec.matrices.assign(static_cast<std::size_t>(config.grid.n_points),
                            ChannelMatrix::Zero(config.n_rx, config.n_tx));
        for (int tx = 0; tx < config.n_tx; ++tx)
            for (int rx = 0; rx < config.n_rx; ++rx)
            {
                const auto h = detail::synth_subchannel(config, n_cones, stirrer_index, rx, tx);
                for (int i = 0; i < config.grid.n_points; ++i)
                    rec.matrices[static_cast<std::size_t>(i)](rx, tx) = h[static_cast<std::size_t>(i)];
            }
        return rec;
    }

    // One record per (cone level x stirrer position), in configuration order.
    // Records are independent given their indices, so generation may be spread
    // over n_threads without changing a single bit of the result.
    inline Campaign synth_campaign(const CavityConfig &config, int n_threads = 1)
    {
        config.require_valid();
        if (n_threads < 1)
            throw std::invalid_argument("synth_campaign: n_threads must be >= 1");

        std::vector<std::pair<int, int>> jobs; // (n_cones, stirrer_index)
        for (int cones : config.cone_levels)
            for (int s = 0; s < config.n_stirrer; ++s)
                jobs.emplace_back(cones, s);

        Campaign campaign;
        campaign.records.resize(jobs.size());

        const auto worker = [&](std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j)
                campaign.records[j] = synth_sweep(config, jobs[j].first, jobs[j].second);
        };

        if (n_threads == 1 || jobs.size() < 2)
        {
            worker(0, jobs.size());
        }
        else
        {
            const std::size_t n = jobs.size();
            const std::size_t used = std::min<std::size_t>(static_cast<std::size_t>(n_threads), n);
            std::vector<std::thread> pool;
            pool.reserve(used);
            for (std::size_t t = 0; t < used; ++t)
            {
                const std::size_t begin = n * t / used;
                const std::size_t end = n * (t + 1) / used;
                pool.emplace_back(worker, begin, end);
            }
            for (std::thread &th : pool)
                th.join();
        }
        return campaign;
    }

    // Timing of a stepped sweep: total time is points times per-point dwell.
    // A single-point "sweep" is a legal schedule even though it cannot carry a
    // SweepRecord.
    inline SweepSchedule simulate_sweep_schedule(const FrequencyGrid &grid, double dwell_per_point_s,
                                                 int snapshots_per_point, int samples_per_snapshot)
    {
        if (grid.n_points < 1)
            throw std::invalid_argument("simulate_sweep_schedule: n_points must be >= 1");
        if (!(dwell_per_point_s > 0.0))
            throw std::invalid_argument("simulate_sweep_schedule: dwell must be > 0");
        SweepSchedule s;
        s.n_points = grid.n_points;
        s.dwell_per_point_s = dwell_per_point_s;
        s.snapshots_per_point = snapshots_per_point;
        s.samples_per_snapshot = samples_per_snapshot;
        s.total_sweep_time_s = grid.n_points * dwell_per_point_s;
        return s;
    }

} // namespace cavitylink

#endif

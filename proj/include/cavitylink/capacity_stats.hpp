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
//
// Distributional analysis of capacity and band-averaged gain across
// stirrer/loading ensembles: kernel density estimates, multimodality
// detection, the small-SNR capacity approximation, and loading-sweep
// moment curves.

#ifndef CAVITYLINK_CAPACITY_STATS_HPP
#define CAVITYLINK_CAPACITY_STATS_HPP

#include "cavitylink/channel.hpp"
#include "cavitylink/metrics.hpp"
#include "cavitylink/stats.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cavitylink
{
    // Gaussian-kernel density estimate on a uniform 512-point support grid.
    struct DensityEstimate
    {
        std::vector<double> support;
        std::vector<double> density;
        double bandwidth_used = 0.0;
        int n_samples = 0;
    };

    struct ModePeak
    {
        double location = 0.0;
        double height = 0.0;
    };

    struct ModeReport
    {
        int count = 0;
        std::vector<ModePeak> peaks;
    };

    struct LoadingPoint
    {
        int n_cones = 0;
        double mean = 0.0;
        std::optional<double> variance; // absent when fewer than 2 samples
        int n_samples = 0;
    };

    struct LoadingCurve
    {
        int rx = 0;
        int tx = 0;
        std::vector<LoadingPoint> points;
    };

    // One wideband capacity value per record matching the requested loading,
    // i.e. one sample per stirrer position.
    inline std::vector<double> capacity_samples(const Campaign &campaign, double rho, int n_cones)
    {
        std::vector<double> out;
        for (const SweepRecord &rec : campaign.records)
            if (rec.condition.n_cones == n_cones)
                out.push_back(capacity_wideband(rec, rho));
        if (out.empty())
            throw std::invalid_argument("capacity_samples: no record has " +
                                        std::to_string(n_cones) + " cones");
        return out;
    }

    // Gaussian KDE with the Silverman rule bandwidth
    //   h = 0.9 min(sigma, IQR/1.34) n^(-1/5)
    // (population sigma; falls back to sigma alone when the IQR collapses),
    // evaluated on 512 points spanning [min - 3h, max + 3h] and renormalized to
    // unit trapezoidal integral.
    inline DensityEstimate estimate_density(std::span<const double> samples)
    {
        if (samples.size() < 2)
            throw std::invalid_argument("estimate_density: need at least 2 samples");
        const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
        if (!(*hi_it > *lo_it))
            throw std::invalid_argument("estimate_density: samples have zero spread");

        const double sigma = stats::population_stddev(samples);
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const double iqr = stats::quantile_sorted(sorted, 0.75) - stats::quantile_sorted(sorted, 0.25);
        double spread = std::min(sigma, iqr / 1.34);
        if (!(spread > 0.0))
            spread = sigma;
        const double n = static_cast<double>(samples.size());
        const double h = 0.9 * spread * std::pow(n, -0.2);

        constexpr int kGridPoints = 512;
        DensityEstimate est;
        est.bandwidth_used = h;
        est.n_samples = static_cast<int>(samples.size());
        est.support.resize(kGridPoints);
        est.density.resize(kGridPoints);

        const double lo = *lo_it - 3.0 * h;
        const double hi = *hi_it + 3.0 * h;
        const double step = (hi - lo) / (kGridPoints - 1);
        const double norm = 1.0 / (n * h * std::sqrt(2.0 * M_PI));
        for (int i = 0; i < kGridPoints; ++i)
        {
            const double x = lo + step * i;
            double d = 0.0;
            for (double s : samples)
            {
                const double z = (x - s) / h;
                d += std::exp(-0.5 * z * z);
            }
            est.support[static_cast<std::size_t>(i)] = x;
            est.density[static_cast<std::size_t>(i)] = norm * d;
        }

        double integral = 0.0;
        for (int i = 0; i + 1 < kGridPoints; ++i)
            integral += 0.5 * (est.density[i] + est.density[i + 1]) * step;
        for (double &d : est.density)
            d /= integral;
        return est;
    }

    // Counts isolated dominant peaks: strict local maxima taller than
    // prominence_fraction of the global maximum whose separating valley dips
    // below (1 - prominence_fraction) times the smaller neighboring peak.
    // Candidates failing the valley test merge into their taller neighbor.
    inline ModeReport detect_modes(const DensityEstimate &density, double prominence_fraction = 0.1)
    {
        if (density.density.size() < 3 || density.density.size() != density.support.size())
            throw std::invalid_argument("detect_modes: malformed density");
        if (!(prominence_fraction > 0.0) || !(prominence_fraction < 1.0))
            throw std::invalid_argument("detect_modes: prominence_fraction must be in (0,1)");

        const std::vector<double> &d = density.density;
        const double global_max = *std::max_element(d.begin(), d.end());
        const double height_cut = prominence_fraction * global_max;

        std::vector<std::size_t> candidates;
        for (std::size_t i = 1; i + 1 < d.size(); ++i)
            if (d[i] > d[i - 1] && d[i] > d[i + 1] && d[i] > height_cut)
                candidates.push_back(i);

        ModeReport report;
        if (candidates.empty())
            return report;

        std::vector<std::size_t> kept{candidates.front()};
        for (std::size_t c = 1; c < candidates.size(); ++c)
        {
            const std::size_t prev = kept.back();
            const std::size_t cur = candidates[c];
            double valley = d[prev];
            for (std::size_t i = prev; i <= cur; ++i)
                valley = std::min(valley, d[i]);
            const double smaller_peak = std::min(d[prev], d[cur]);
            if (valley < (1.0 - prominence_fraction) * smaller_peak)
                kept.push_back(cur);
            else if (d[cur] > d[prev])
                kept.back() = cur; // merged: keep the taller representative
        }

        report.count = static_cast<int>(kept.size());
        for (std::size_t i : kept)
            report.peaks.push_back({density.support[i], d[i]});
        return report;
    }

    // First-order small-SNR capacity: (rho / (N_T ln 2)) times the frequency
    // mean of the squared Frobenius norm of H. Matches capacity_wideband to
    // first order in rho and exactly at rho = 0.
    inline double small_rho_capacity(const SweepRecord &sweep, double rho)
    {
        if (rho < 0.0)
            throw std::invalid_argument("small_rho_capacity: rho must be >= 0");
        if (sweep.matrices.empty())
            throw std::invalid_argument("small_rho_capacity: empty sweep");
        double acc = 0.0;
        for (const ChannelMatrix &m : sweep.matrices)
            acc += m.squaredNorm();
        acc /= static_cast<double>(sweep.matrices.size());
        return rho / (static_cast<double>(sweep.n_tx()) * std::log(2.0)) * acc;
    }

    // Frequency mean of |H_rx,tx(f)|^2, the band-averaged subchannel gain.
    inline double band_avg_gain(const SweepRecord &sweep, int rx, int tx)
    {
        detail::require_subchannel(sweep, rx, tx);
        double acc = 0.0;
        for (const ChannelMatrix &m : sweep.matrices)
            acc += std::norm(m(rx, tx));
        return acc / static_cast<double>(sweep.matrices.size());
    }

    // Mean and population variance of the band-averaged gain across stirrer
    // positions, per subchannel and per loading level; points are ordered by
    // ascending cone count. Requires at least two distinct loadings.
    inline std::vector<LoadingCurve> gain_stats_vs_loading(const Campaign &campaign)
    {
        if (campaign.records.empty())
            throw std::invalid_argument("gain_stats_vs_loading: empty campaign");
        const int n_rx = campaign.records.front().n_rx();
        const int n_tx = campaign.records.front().n_tx();
        for (const SweepRecord &rec : campaign.records)
            if (rec.n_rx() != n_rx || rec.n_tx() != n_tx)
                throw std::invalid_argument("gain_stats_vs_loading: records disagree on antenna counts");

        std::vector<int> levels;
        for (const SweepRecord &rec : campaign.records)
            if (std::find(levels.begin(), levels.end(), rec.condition.n_cones) == levels.end())
                levels.push_back(rec.condition.n_cones);
        std::sort(levels.begin(), levels.end());
        if (levels.size() < 2)
            throw std::invalid_argument("gain_stats_vs_loading: need >= 2 loading levels");

        std::vector<LoadingCurve> curves;
        for (int rx = 0; rx < n_rx; ++rx)
            for (int tx = 0; tx < n_tx; ++tx)
            {
                LoadingCurve curve;
                curve.rx = rx;
                curve.tx = tx;
                for (int level : levels)
                {
                    std::vector<double> gains;
                    for (const SweepRecord &rec : campaign.records)
                        if (rec.condition.n_cones == level)
                            gains.push_back(band_avg_gain(rec, rx, tx));
                    LoadingPoint point;
                    point.n_cones = level;
                    point.n_samples = static_cast<int>(gains.size());
                    point.mean = stats::mean(gains);
                    if (gains.size() >= 2)
                        point.variance = stats::population_variance(gains);
                    curve.points.push_back(std::move(point));
                }
                curves.push_back(std::move(curve));
            }
        return curves;
    }

} // namespace cavitylink

#endif

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
// Channel parameter extraction from frequency sweeps: power delay profile,
// delay spread, coherence bandwidth, path loss, Rician K factor, wideband
// capacity, condition number and eigenvalue statistics.
//
// Conventions used throughout this header:
//   - moments are population moments (divide by n);
//   - the wideband capacity is the log-det form, reducing to the scalar
//     log2(1 + rho |H|^2 / N_T) for a 1x1 link;
//   - frequency means realize 1/B * integral as the arithmetic mean over the
//     grid samples;
//   - quantities that can exceed any finite value (rank-deficient condition
//     number, zero-scatter Rician K, never-decorrelating coherence) are
//     returned as a Saturating value instead of throwing.

#ifndef CAVITYLINK_METRICS_HPP
#define CAVITYLINK_METRICS_HPP

#include "cavitylink/channel.hpp"
#include "cavitylink/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavitylink
{
    // A value with an explicit "pegged at the physical limit" marker.
    struct Saturating
    {
        double value = 0.0;
        bool saturated = false;
    };

    enum class Window
    {
        rectangular, // preserves Parseval exactly
        hann         // suppresses leakage sidelobes for visual reports
    };

    inline const char *window_name(Window w)
    {
        return w == Window::rectangular ? "rectangular" : "hann";
    }

    // Delay-domain power sequence of one subchannel. Delay bins are labeled
    // with the Fourier-limit resolution 1/(f_stop - f_start); powers come from
    // the n-point inverse DFT of the (windowed) frequency response.
    struct PowerDelayProfile
    {
        std::vector<double> delays_s;
        std::vector<double> powers;
        double resolution_s = 0.0;
        std::string window_name;
    };

    // Log-distance path loss fit: loss(d) = pl_d0 + 10 alpha log10(d/d0) + X_sigma.
    struct PathLossModel
    {
        double pl_d0_db = 0.0;
        double d0_m = 0.0;
        double alpha = 0.0;
        double sigma_db = 0.0;
        std::vector<double> residuals_db;
    };

    struct PathLossSample
    {
        double distance_m = 0.0;
        double loss_db = 0.0;
    };

    // Frequency autocorrelation magnitude and the coherence bandwidths read
    // off it at caller-chosen thresholds.
    struct CoherenceReport
    {
        std::vector<double> lags_hz;
        std::vector<double> correlation; // |R|, in [0,1], correlation[0] == 1
        std::map<double, Saturating> bc_at;
    };

    namespace detail
    {
        inline void require_subchannel(const SweepRecord &sweep, int rx, int tx)
        {
            if (sweep.matrices.empty())
                throw std::invalid_argument("sweep has no matrices");
            if (rx < 0 || rx >= sweep.n_rx() || tx < 0 || tx >= sweep.n_tx())
                throw std::invalid_argument("subchannel index out of range");
        }

        inline std::vector<Complex> subchannel(const SweepRecord &sweep, int rx, int tx)
        {
            require_subchannel(sweep, rx, tx);
            std::vector<Complex> h;
            h.reserve(sweep.matrices.size());
            for (const ChannelMatrix &m : sweep.matrices)
                h.push_back(m(rx, tx));
            return h;
        }

        inline std::vector<double> make_window(Window w, std::size_t n)
        {
            std::vector<double> win(n, 1.0);
            if (w == Window::hann)
                for (std::size_t k = 0; k < n; ++k)
                    win[k] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(k) /
                                                   static_cast<double>(n - 1)));
            return win;
        }

        // Inverse DFT X_m = (1/n) sum_k x_k exp(+j 2 pi k m / n), via an exact
        // twiddle table; grids are a few hundred points, so the O(n^2) direct
        // form is both fast enough and free of plan state.
        inline std::vector<Complex> inverse_dft(const std::vector<Complex> &x)
        {
            const std::size_t n = x.size();
            std::vector<Complex> twiddle(n);
            for (std::size_t t = 0; t < n; ++t)
                twiddle[t] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(t) /
                                                 static_cast<double>(n));
            std::vector<Complex> out(n);
            for (std::size_t m = 0; m < n; ++m)
            {
                Complex acc{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k)
                    acc += x[k] * twiddle[(k * m) % n];
                out[m] = acc / static_cast<double>(n);
            }
            return out;
        }
    } // namespace detail

    // Squared magnitude of the inverse DFT of the windowed transfer function.
    // With the rectangular window, sum(powers) equals the frequency mean of
    // |H(f)|^2 exactly (Parseval).
    inline PowerDelayProfile power_delay_profile(const SweepRecord &sweep, int rx, int tx,
                                                 Window window = Window::rectangular)
    {
        std::vector<Complex> h = detail::subchannel(sweep, rx, tx);
        const std::vector<double> win = detail::make_window(window, h.size());
        for (std::size_t k = 0; k < h.size(); ++k)
            h[k] *= win[k];

        const std::vector<Complex> taps = detail::inverse_dft(h);

        PowerDelayProfile pdp;
        pdp.resolution_s = sweep.grid.delay_resolution_s();
        pdp.window_name = cavitylink::window_name(window);
        pdp.delays_s.resize(taps.size());
        pdp.powers.resize(taps.size());
        for (std::size_t m = 0; m < taps.size(); ++m)
        {
            pdp.delays_s[m] = static_cast<double>(m) * pdp.resolution_s;
            pdp.powers[m] = std::norm(taps[m]);
        }
        return pdp;
    }

    // Mean PDP over an ensemble of records (same grid and antenna layout),
    // e.g. over stirrer positions at one loading.
    inline PowerDelayProfile ensemble_mean_pdp(const std::vector<const SweepRecord *> &records,
                                               int rx, int tx, Window window = Window::rectangular)
    {
        if (records.empty())
            throw std::invalid_argument("ensemble_mean_pdp: empty ensemble");
        PowerDelayProfile acc = power_delay_profile(*records.front(), rx, tx, window);
        for (std::size_t r = 1; r < records.size(); ++r)
        {
            const PowerDelayProfile p = power_delay_profile(*records[r], rx, tx, window);
            if (p.powers.size() != acc.powers.size())
                throw std::invalid_argument("ensemble_mean_pdp: mismatched grids");
            for (std::size_t m = 0; m < p.powers.size(); ++m)
                acc.powers[m] += p.powers[m];
        }
        for (double &v : acc.powers)
            v /= static_cast<double>(records.size());
        return acc;
    }

    namespace detail
    {
        // Thresholds the PDP at threshold_db below its peak and re-references
        // delays to the first surviving bin; returns P-weighted moments.
        struct PdpMoments
        {
            double mean_excess_s = 0.0;
            double second_moment_s2 = 0.0;
        };

        inline PdpMoments thresholded_moments(const PowerDelayProfile &pdp, double threshold_db)
        {
            if (pdp.powers.empty())
                throw std::invalid_argument("delay spread: empty profile");
            const double peak = *std::max_element(pdp.powers.begin(), pdp.powers.end());
            if (!(peak > 0.0) || !std::isfinite(peak))
                throw std::invalid_argument("delay spread: profile has no positive power");
            const double cut = peak * std::pow(10.0, -threshold_db / 10.0);

            double p_sum = 0.0, m1 = 0.0, m2 = 0.0, t_ref = -1.0;
            for (std::size_t k = 0; k < pdp.powers.size(); ++k)
            {
                const double p = pdp.powers[k];
                if (p < cut)
                    continue;
                if (t_ref < 0.0)
                    t_ref = pdp.delays_s[k];
                const double t = pdp.delays_s[k] - t_ref;
                p_sum += p;
                m1 += p * t;
                m2 += p * t * t;
            }
            if (!(p_sum > 0.0))
                throw std::invalid_argument("delay spread: no bins survive the threshold");
            return {m1 / p_sum, m2 / p_sum};
        }
    } // namespace detail

    // RMS delay spread: square root of the second central moment of the
    // thresholded, re-referenced PDP.
    inline double rms_delay_spread(const PowerDelayProfile &pdp, double threshold_db)
    {
        const auto m = detail::thresholded_moments(pdp, threshold_db);
        return std::sqrt(std::max(0.0, m.second_moment_s2 - m.mean_excess_s * m.mean_excess_s));
    }

    // First P-weighted moment of the thresholded, re-referenced PDP.
    inline double mean_excess_delay(const PowerDelayProfile &pdp, double threshold_db)
    {
        return detail::thresholded_moments(pdp, threshold_db).mean_excess_s;
    }

    namespace detail
    {
        // Correlation magnitude at every grid lag. Numerator and the two energy
        // sums run over the same overlap window; the Cauchy-Schwarz
        // normalization keeps |R| within [0,1] for any input.
        inline std::vector<double> autocorr_magnitude(const std::vector<std::vector<Complex>> &ensemble)
        {
            const std::size_t n = ensemble.front().size();
            std::vector<double> r(n, 0.0);
            for (std::size_t m = 0; m < n; ++m)
            {
                Complex num{0.0, 0.0};
                double left = 0.0, right = 0.0;
                for (const std::vector<Complex> &h : ensemble)
                    for (std::size_t k = 0; k + m < n; ++k)
                    {
                        num += h[k] * std::conj(h[k + m]);
                        left += std::norm(h[k]);
                        right += std::norm(h[k + m]);
                    }
                const double denom = std::sqrt(left * right);
                if (!(denom > 0.0))
                {
                    if (m == 0)
                        throw std::invalid_argument("freq_autocorrelation: zero-power subchannel");
                    r[m] = 0.0;
                    continue;
                }
                r[m] = std::abs(num) / denom;
            }
            r[0] = 1.0;
            return r;
        }

        inline CoherenceReport report_from(const FrequencyGrid &grid, std::vector<double> r)
        {
            CoherenceReport rep;
            rep.lags_hz.resize(r.size());
            for (std::size_t m = 0; m < r.size(); ++m)
                rep.lags_hz[m] = static_cast<double>(m) * grid.spacing_hz();
            rep.correlation = std::move(r);
            return rep;
        }
    } // namespace detail

    // Frequency autocorrelation of one subchannel within a single record (the
    // channel is static per stirrer position, so averaging runs over frequency).
    inline CoherenceReport freq_autocorrelation(const SweepRecord &sweep, int rx, int tx)
    {
        const std::vector<std::vector<Complex>> ens{detail::subchannel(sweep, rx, tx)};
        return detail::report_from(sweep.grid, detail::autocorr_magnitude(ens));
    }

    // Ensemble variant: correlation sums pooled across records before
    // normalization, for the smooth decorrelation curves of stirred ensembles.
    inline CoherenceReport ensemble_freq_autocorrelation(const std::vector<const SweepRecord *> &records,
                                                         int rx, int tx)
    {
        if (records.empty())
            throw std::invalid_argument("ensemble_freq_autocorrelation: empty ensemble");
        std::vector<std::vector<Complex>> ens;
        ens.reserve(records.size());
        for (const SweepRecord *rec : records)
        {
            if (!(rec->grid == records.front()->grid))
                throw std::invalid_argument("ensemble_freq_autocorrelation: mismatched grids");
            ens.push_back(detail::subchannel(*rec, rx, tx));
        }
        return detail::report_from(records.front()->grid, detail::autocorr_magnitude(ens));
    }

    // Smallest lag at which |R| first drops below the threshold, linearly
    // interpolated between lag samples. Saturates at the full grid bandwidth
    // when the correlation never drops that far.
    inline Saturating coherence_bandwidth(const CoherenceReport &report, double threshold)
    {
        if (!(threshold > 0.0) || !(threshold < 1.0))
            throw std::invalid_argument("coherence_bandwidth: threshold must be in (0,1)");
        if (report.correlation.empty() || report.lags_hz.size() != report.correlation.size())
            throw std::invalid_argument("coherence_bandwidth: malformed report");
        for (std::size_t m = 1; m < report.correlation.size(); ++m)
        {
            if (report.correlation[m] < threshold)
            {
                const double r0 = report.correlation[m - 1];
                const double r1 = report.correlation[m];
                const double frac = (r0 - threshold) / (r0 - r1);
                return {report.lags_hz[m - 1] + frac * (report.lags_hz[m] - report.lags_hz[m - 1]),
                        false};
            }
        }
        return {report.lags_hz.back(), true};
    }

    // Rule-of-thumb coherence bandwidth from the RMS delay spread:
    // 1/(5 tau_rms) at the 0.5 threshold, 1/(50 tau_rms) at 0.9.
    inline double coherence_bw_from_delay_spread(double tau_rms_s, double threshold)
    {
        if (!(tau_rms_s > 0.0))
            throw std::invalid_argument("coherence_bw_from_delay_spread: tau_rms must be > 0");
        if (threshold == 0.5)
            return 1.0 / (5.0 * tau_rms_s);
        if (threshold == 0.9)
            return 1.0 / (50.0 * tau_rms_s);
        throw std::invalid_argument("coherence_bw_from_delay_spread: threshold must be 0.5 or 0.9");
    }

    // Free-space path loss at the reference distance: 20 log10(4 pi d0 / lambda).
    inline double free_space_path_loss_db(double d0_m, double wavelength_m)
    {
        if (!(d0_m > 0.0) || !(wavelength_m > 0.0))
            throw std::invalid_argument("free_space_path_loss_db: inputs must be > 0");
        return 20.0 * std::log10(4.0 * M_PI * d0_m / wavelength_m);
    }

    // Ordinary least squares of loss in dB against 10 log10(d/d0). The slope in
    // dB per decade divided by 10 is the path loss exponent alpha; sigma is the
    // population standard deviation of the residuals (the shadowing estimate).
    inline PathLossModel fit_path_loss(const std::vector<PathLossSample> &samples, double d0_m)
    {
        if (!(d0_m > 0.0))
            throw std::invalid_argument("fit_path_loss: d0 must be > 0");
        if (samples.size() < 2)
            throw std::invalid_argument("fit_path_loss: need at least 2 samples");

        std::vector<double> x(samples.size()), y(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            if (!(samples[i].distance_m > 0.0))
                throw std::invalid_argument("fit_path_loss: distances must be > 0");
            x[i] = 10.0 * std::log10(samples[i].distance_m / d0_m);
            y[i] = samples[i].loss_db;
        }
        bool distinct = false;
        for (std::size_t i = 1; i < x.size(); ++i)
            if (x[i] != x[0])
                distinct = true;
        if (!distinct)
            throw std::invalid_argument("fit_path_loss: all distances equal (rank deficient)");

        const auto [intercept, slope] = stats::linear_fit(x, y);

        PathLossModel model;
        model.pl_d0_db = intercept;
        model.d0_m = d0_m;
        model.alpha = slope; // slope is dB per 10*log10(d/d0), i.e. alpha directly
        model.residuals_db.resize(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            model.residuals_db[i] = y[i] - (intercept + slope * x[i]);
        model.sigma_db = stats::population_stddev(model.residuals_db);
        return model;
    }

    // One path loss sample per (record, subchannel): the link distance paired
    // with -10 log10 of the band-averaged gain.
    inline std::vector<PathLossSample> path_loss_samples(const Campaign &campaign)
    {
        std::vector<PathLossSample> out;
        for (const SweepRecord &rec : campaign.records)
            for (int rx = 0; rx < rec.n_rx(); ++rx)
                for (int tx = 0; tx < rec.n_tx(); ++tx)
                {
                    double g = 0.0;
                    for (const ChannelMatrix &m : rec.matrices)
                        g += std::norm(m(rx, tx));
                    g /= static_cast<double>(rec.matrices.size());
                    if (!(g > 0.0))
                        throw std::invalid_argument("path_loss_samples: zero-power subchannel");
                    out.push_back({rec.condition.d_link_m, -10.0 * std::log10(g)});
                }
        return out;
    }

    // Rician K of a stirred ensemble: |mean(S)|^2 / mean(|S - mean(S)|^2) with
    // population means. An ensemble without scatter saturates to infinite K;
    // scatter below 1e-30 of the mean square value counts as zero, which
    // absorbs the rounding left over when all samples are identical.
    inline Saturating rician_k(std::span<const Complex> ensemble)
    {
        if (ensemble.size() < 2)
            throw std::invalid_argument("rician_k: ensemble size must be >= 2");
        Complex mean{0.0, 0.0};
        double mean_sq = 0.0;
        for (const Complex &s : ensemble)
        {
            mean += s;
            mean_sq += std::norm(s);
        }
        mean /= static_cast<double>(ensemble.size());
        mean_sq /= static_cast<double>(ensemble.size());
        double scatter = 0.0;
        for (const Complex &s : ensemble)
            scatter += std::norm(s - mean);
        scatter /= static_cast<double>(ensemble.size());
        if (!(scatter > 1e-30 * mean_sq))
            return {std::numeric_limits<double>::infinity(), true};
        return {std::norm(mean) / scatter, false};
    }

    // Per-frequency K of one subchannel, the ensemble running across records
    // (stirrer positions at fixed loading and geometry).
    inline std::vector<Saturating> rician_k_per_frequency(const std::vector<const SweepRecord *> &records,
                                                          int rx, int tx)
    {
        if (records.size() < 2)
            throw std::invalid_argument("rician_k_per_frequency: need >= 2 records");
        for (const SweepRecord *rec : records)
        {
            detail::require_subchannel(*rec, rx, tx);
            if (!(rec->grid == records.front()->grid))
                throw std::invalid_argument("rician_k_per_frequency: mismatched grids");
        }
        const int n_points = records.front()->grid.n_points;
        std::vector<Saturating> out;
        out.reserve(static_cast<std::size_t>(n_points));
        std::vector<Complex> ens(records.size());
        for (int k = 0; k < n_points; ++k)
        {
            for (std::size_t r = 0; r < records.size(); ++r)
                ens[r] = records[r]->matrices[static_cast<std::size_t>(k)](rx, tx);
            out.push_back(rician_k(ens));
        }
        return out;
    }

    // Band summary: median of the per-frequency K values. Saturates only if at
    // least half of the frequencies saturate.
    inline Saturating rician_k_band_median(const std::vector<const SweepRecord *> &records,
                                           int rx, int tx)
    {
        const std::vector<Saturating> per_f = rician_k_per_frequency(records, rx, tx);
        std::vector<double> values;
        values.reserve(per_f.size());
        for (const Saturating &s : per_f)
            values.push_back(s.saturated ? std::numeric_limits<double>::infinity() : s.value);
        const double med = stats::median(values);
        if (std::isinf(med))
            return {med, true};
        return {med, false};
    }

    namespace detail
    {
        // log2 det(I + (rho/n_tx) H H^dagger) via Cholesky of the Hermitian
        // positive definite Gram matrix.
        inline double log2_det_capacity(const ChannelMatrix &h, double rho)
        {
            const Eigen::Index n_rx = h.rows();
            const double scale = rho / static_cast<double>(h.cols());
            ChannelMatrix a = ChannelMatrix::Identity(n_rx, n_rx) + scale * (h * h.adjoint());
            const Eigen::LLT<ChannelMatrix> llt(a);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("capacity: Cholesky factorization failed");
            double log2det = 0.0;
            for (Eigen::Index i = 0; i < n_rx; ++i)
                log2det += 2.0 * std::log2(llt.matrixLLT()(i, i).real());
            return log2det;
        }
    } // namespace detail

    // Wideband capacity in bits/s/Hz: the frequency mean of
    // log2 det(I + (rho/N_T) H(f) H(f)^dagger), rho being the linear SNR per
    // receive antenna. Frequencies are reduced in index order.
    inline double capacity_wideband(const SweepRecord &sweep, double rho)
    {
        if (rho < 0.0)
            throw std::invalid_argument("capacity_wideband: rho must be >= 0");
        if (sweep.matrices.empty())
            throw std::invalid_argument("capacity_wideband: empty sweep");
        if (rho == 0.0)
            return 0.0;
        double acc = 0.0;
        for (const ChannelMatrix &m : sweep.matrices)
            acc += detail::log2_det_capacity(m, rho);
        return acc / static_cast<double>(sweep.matrices.size());
    }

    // Condition number in dB, 20 log10(sigma_max/sigma_min); rank-deficient
    // matrices saturate. A relative floor of 1e-12 on sigma_min absorbs the
    // rounding of exactly singular inputs.
    inline Saturating condition_number_db(const ChannelMatrix &h)
    {
        if (h.size() == 0)
            throw std::invalid_argument("condition_number_db: empty matrix");
        Eigen::JacobiSVD<ChannelMatrix> svd(h);
        const auto &sv = svd.singularValues();
        const double s_max = sv(0);
        const double s_min = sv(sv.size() - 1);
        if (!(s_max > 0.0))
            throw std::invalid_argument("condition_number_db: zero matrix");
        if (s_min <= s_max * 1e-12)
            return {std::numeric_limits<double>::infinity(), true};
        return {20.0 * std::log10(s_max / s_min), false};
    }

    // Eigenvalues of H H^dagger pooled over every record and frequency, sorted
    // descending per matrix and grouped by sorted index. samples_db[i] is the
    // ascending-sorted pool for eigenvalue index i (0 = largest), in
    // 10 log10(lambda); a zero eigenvalue maps to -infinity dB.
    struct EigenvalueCdf
    {
        std::vector<std::vector<double>> samples_db;

        double quantile_db(std::size_t index, double p) const
        {
            return stats::quantile_sorted(samples_db.at(index), p);
        }

        // Gap between adjacent sorted-index CDFs at probability level p;
        // entry i is quantile(index i) - quantile(index i+1), in dB.
        std::vector<double> gaps_db_at(double p) const
        {
            std::vector<double> gaps;
            for (std::size_t i = 0; i + 1 < samples_db.size(); ++i)
                gaps.push_back(quantile_db(i, p) - quantile_db(i + 1, p));
            return gaps;
        }
    };

    inline EigenvalueCdf eigenvalue_cdf(const Campaign &campaign)
    {
        if (campaign.records.empty())
            throw std::invalid_argument("eigenvalue_cdf: empty campaign");
        const int n_rx = campaign.records.front().n_rx();
        const int n_tx = campaign.records.front().n_tx();
        const int n_eigen = std::min(n_rx, n_tx);
        for (const SweepRecord &rec : campaign.records)
            if (rec.n_rx() != n_rx || rec.n_tx() != n_tx)
                throw std::invalid_argument("eigenvalue_cdf: records disagree on antenna counts");

        EigenvalueCdf cdf;
        cdf.samples_db.assign(static_cast<std::size_t>(n_eigen), {});
        Eigen::SelfAdjointEigenSolver<ChannelMatrix> solver;
        for (const SweepRecord &rec : campaign.records)
            for (const ChannelMatrix &m : rec.matrices)
            {
                const ChannelMatrix gram = m * m.adjoint();
                solver.compute(gram, Eigen::EigenvaluesOnly);
                const auto &ev = solver.eigenvalues(); // ascending
                for (int i = 0; i < n_eigen; ++i)
                {
                    const double lambda = std::max(0.0, ev(ev.size() - 1 - i));
                    cdf.samples_db[static_cast<std::size_t>(i)].push_back(
                        lambda > 0.0 ? 10.0 * std::log10(lambda)
                                     : -std::numeric_limits<double>::infinity());
                }
            }
        for (auto &v : cdf.samples_db)
            std::sort(v.begin(), v.end());
        return cdf;
    }

} // namespace cavitylink

#endif

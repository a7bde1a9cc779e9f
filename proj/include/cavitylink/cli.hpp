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
// Command line front end. Subcommands:
//   synth          configuration -> campaign file
//   validate       campaign file -> invariant violation listing
//   analyze        campaign file -> per-record and per-loading metric CSVs
//   capacity-stats campaign file -> capacity density/mode/loading CSVs
//   report         metric CSVs -> SVG figures
// Exit codes: 0 success, 1 validation/processing failure, 2 usage error.

#ifndef CAVITYLINK_CLI_HPP
#define CAVITYLINK_CLI_HPP

#include "cavitylink/capacity_stats.hpp"
#include "cavitylink/cavity.hpp"
#include "cavitylink/channel.hpp"
#include "cavitylink/io.hpp"
#include "cavitylink/metrics.hpp"
#include "cavitylink/report.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cavitylink::cli
{
    namespace detail
    {
        using io::detail::format_double_short;

        // Stirrer ensembles group by loading and geometry.
        struct GroupKey
        {
            int n_cones;
            double d_link_m, d_tx_m, d_rx_m;
            friend auto operator<=>(const GroupKey &, const GroupKey &) = default;
        };

        inline std::map<GroupKey, std::vector<const SweepRecord *>> group_records(const Campaign &campaign)
        {
            std::map<GroupKey, std::vector<const SweepRecord *>> groups;
            for (const SweepRecord &rec : campaign.records)
                groups[{rec.condition.n_cones, rec.condition.d_link_m, rec.condition.d_tx_m,
                        rec.condition.d_rx_m}]
                    .push_back(&rec);
            return groups;
        }

        inline std::string joined(const std::vector<double> &values)
        {
            std::string out;
            for (std::size_t i = 0; i < values.size(); ++i)
            {
                if (i)
                    out += ';';
                out += format_double_short(values[i]);
            }
            return out;
        }

        inline std::uint64_t parse_seed_text(const std::string &text, const std::string &origin)
        {
            std::uint64_t v = 0;
            const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
                throw std::runtime_error(origin + " is not a valid unsigned integer seed: '" +
                                         text + "'");
            return v;
        }
    } // namespace detail

    inline int cmd_synth(const std::string &config_path, const std::string &out_path,
                         const std::string &seed_flag, int threads)
    {
        CavityConfig config = config_path.empty() ? CavityConfig{} : io::load_config(config_path);
        if (const char *env = std::getenv("CAVITYLINK_SEED"))
            config.seed = detail::parse_seed_text(env, "CAVITYLINK_SEED");
        if (!seed_flag.empty())
            config.seed = detail::parse_seed_text(seed_flag, "--seed");
        config.require_valid();

        Campaign campaign = synth_campaign(config, threads);
        campaign.metadata["generator"] = "cavitylink synth";
        campaign.metadata["seed"] = std::to_string(config.seed);
        campaign.metadata["tau0_s"] = detail::format_double_short(config.tau0_s);
        campaign.metadata["beta"] = detail::format_double_short(config.beta);
        campaign.metadata["k_target"] = detail::format_double_short(config.k_target);
        campaign.metadata["n_taps"] = std::to_string(config.n_taps);
        campaign.metadata["tap_spacing_s"] = detail::format_double_short(config.tap_spacing_s);
        campaign.metadata["wavelength_m"] = detail::format_double_short(config.wavelength_m);
        if (config.noise_floor_db)
            campaign.metadata["noise_floor_db"] = detail::format_double_short(*config.noise_floor_db);

        io::write_campaign(campaign, out_path);
        std::cout << "wrote " << campaign.records.size() << " records ("
                  << config.grid.n_points << " points, " << config.n_rx << "x" << config.n_tx
                  << ") to " << out_path << "\n";
        return 0;
    }

    inline int cmd_validate(const std::string &campaign_path)
    {
        std::ifstream in(campaign_path, std::ios::binary);
        if (!in)
        {
            std::cerr << "cannot open '" << campaign_path << "' for reading\n";
            return 1;
        }
        std::vector<Violation> violations;
        Campaign campaign = io::parse_campaign(in, &violations);
        const std::vector<Violation> more = validate_campaign(campaign);
        violations.insert(violations.end(), more.begin(), more.end());
        if (violations.empty())
        {
            std::cout << "OK: " << campaign.records.size() << " records, no violations\n";
            return 0;
        }
        for (const Violation &v : violations)
            std::cerr << "[record " << v.record_index << "] " << v.message << "\n";
        return 1;
    }

    inline int cmd_analyze(const std::string &campaign_path, const std::string &out_dir,
                           std::vector<double> rho_list, double pdp_threshold_db,
                           const std::string &window_name)
    {
        namespace fs = std::filesystem;
        const Campaign campaign = io::read_campaign(campaign_path);
        if (rho_list.empty())
            rho_list.push_back(10.0);
        const Window window = window_name == "hann" ? Window::hann : Window::rectangular;

        fs::create_directories(out_dir);
        const auto emit = [&](const std::string &name, const std::string &content) {
            io::detail::atomic_write_text(fs::path(out_dir) / name, content);
        };
        const auto fd = detail::format_double_short;

        const FrequencyGrid &grid = campaign.records.front().grid;
        const int n_rx = campaign.records.front().n_rx();
        const int n_tx = campaign.records.front().n_tx();
        for (const SweepRecord &rec : campaign.records)
            if (rec.n_rx() != n_rx || rec.n_tx() != n_tx)
                throw std::invalid_argument("analyze requires uniform antenna counts across records");

        // per-record, per-subchannel dispersion and coherence metrics
        {
            std::string csv = "record_id,stirrer,n_cones,rx,tx,band_avg_gain,tau_rms_s,"
                              "mean_excess_s,bc50_hz,bc50_saturated,bc90_hz,bc90_saturated\n";
            for (std::size_t r = 0; r < campaign.records.size(); ++r)
            {
                const SweepRecord &rec = campaign.records[r];
                for (int rx = 0; rx < n_rx; ++rx)
                    for (int tx = 0; tx < n_tx; ++tx)
                    {
                        const PowerDelayProfile pdp = power_delay_profile(rec, rx, tx, window);
                        const double tau = rms_delay_spread(pdp, pdp_threshold_db);
                        const double excess = mean_excess_delay(pdp, pdp_threshold_db);
                        CoherenceReport coh = freq_autocorrelation(rec, rx, tx);
                        coh.bc_at[0.5] = coherence_bandwidth(coh, 0.5);
                        coh.bc_at[0.9] = coherence_bandwidth(coh, 0.9);
                        const Saturating bc50 = coh.bc_at.at(0.5);
                        const Saturating bc90 = coh.bc_at.at(0.9);
                        csv += std::to_string(r) + "," + std::to_string(rec.condition.stirrer_index) +
                               "," + std::to_string(rec.condition.n_cones) + "," +
                               std::to_string(rx) + "," + std::to_string(tx) + "," +
                               fd(band_avg_gain(rec, rx, tx)) + "," + fd(tau) + "," + fd(excess) +
                               "," + fd(bc50.value) + "," + (bc50.saturated ? "1" : "0") + "," +
                               fd(bc90.value) + "," + (bc90.saturated ? "1" : "0") + "\n";
                    }
            }
            emit("records.csv", csv);
        }

        // wideband capacity per record and SNR
        {
            std::string csv = "record_id,stirrer,n_cones,rho,capacity_bps_hz,small_rho_bps_hz\n";
            for (std::size_t r = 0; r < campaign.records.size(); ++r)
            {
                const SweepRecord &rec = campaign.records[r];
                for (double rho : rho_list)
                    csv += std::to_string(r) + "," + std::to_string(rec.condition.stirrer_index) +
                           "," + std::to_string(rec.condition.n_cones) + "," + fd(rho) + "," +
                           fd(capacity_wideband(rec, rho)) + "," +
                           fd(small_rho_capacity(rec, rho)) + "\n";
            }
            emit("capacity.csv", csv);
        }

        // condition number summary per record
        {
            std::string csv = "record_id,stirrer,n_cones,cond_db_p10,cond_db_p50,cond_db_p90,"
                              "n_saturated\n";
            for (std::size_t r = 0; r < campaign.records.size(); ++r)
            {
                const SweepRecord &rec = campaign.records[r];
                std::vector<double> cond;
                int saturated = 0;
                for (const ChannelMatrix &m : rec.matrices)
                {
                    const Saturating c = condition_number_db(m);
                    if (c.saturated)
                        ++saturated;
                    else
                        cond.push_back(c.value);
                }
                std::string p10 = "", p50 = "", p90 = "";
                if (!cond.empty())
                {
                    std::sort(cond.begin(), cond.end());
                    p10 = fd(stats::quantile_sorted(cond, 0.10));
                    p50 = fd(stats::quantile_sorted(cond, 0.50));
                    p90 = fd(stats::quantile_sorted(cond, 0.90));
                }
                csv += std::to_string(r) + "," + std::to_string(rec.condition.stirrer_index) + "," +
                       std::to_string(rec.condition.n_cones) + "," + p10 + "," + p50 + "," + p90 +
                       "," + std::to_string(saturated) + "\n";
            }
            emit("condition.csv", csv);
        }

        // pooled eigenvalue CDF, decimated to midpoint quantiles
        std::vector<double> eigen_gaps;
        {
            const EigenvalueCdf cdf = eigenvalue_cdf(campaign);
            eigen_gaps = cdf.gaps_db_at(0.10);
            std::string csv = "eigen_index,lambda_db,cum_prob\n";
            constexpr int kQuantiles = 512;
            for (std::size_t i = 0; i < cdf.samples_db.size(); ++i)
                for (int q = 0; q < kQuantiles; ++q)
                {
                    const double p = (q + 0.5) / kQuantiles;
                    csv += std::to_string(i) + "," + fd(cdf.quantile_db(i, p)) + "," + fd(p) + "\n";
                }
            emit("eigenvalues.csv", csv);
        }

        // per-loading ensembles: Rician K, mean PDP, coherence, reference transfer
        {
            const auto groups = detail::group_records(campaign);
            std::string rician = "n_cones,rx,tx,n_ensemble,k_linear,saturated\n";
            std::string pdp_csv = "n_cones,rx,tx,delay_s,power\n";
            std::string coh_csv = "n_cones,rx,tx,lag_hz,abs_corr\n";
            std::string transfer = "n_cones,rx,tx,f_hz,mag_db\n";
            for (const auto &[key, records] : groups)
            {
                const std::string cones = std::to_string(key.n_cones);
                for (int rx = 0; rx < n_rx; ++rx)
                    for (int tx = 0; tx < n_tx; ++tx)
                    {
                        if (records.size() >= 2)
                        {
                            const Saturating k = rician_k_band_median(records, rx, tx);
                            rician += cones + "," + std::to_string(rx) + "," + std::to_string(tx) +
                                      "," + std::to_string(records.size()) + "," + fd(k.value) +
                                      "," + (k.saturated ? "1" : "0") + "\n";
                        }
                        const PowerDelayProfile pdp = ensemble_mean_pdp(records, rx, tx, window);
                        for (std::size_t m = 0; m < pdp.powers.size(); ++m)
                            pdp_csv += cones + "," + std::to_string(rx) + "," +
                                       std::to_string(tx) + "," + fd(pdp.delays_s[m]) + "," +
                                       fd(pdp.powers[m]) + "\n";
                        const CoherenceReport coh = ensemble_freq_autocorrelation(records, rx, tx);
                        for (std::size_t m = 0; m < coh.lags_hz.size(); ++m)
                            coh_csv += cones + "," + std::to_string(rx) + "," +
                                       std::to_string(tx) + "," + fd(coh.lags_hz[m]) + "," +
                                       fd(coh.correlation[m]) + "\n";
                        const SweepRecord &first = *records.front();
                        for (int f = 0; f < grid.n_points; ++f)
                        {
                            const double mag = std::abs(first.matrices[static_cast<std::size_t>(f)](rx, tx));
                            transfer += cones + "," + std::to_string(rx) + "," +
                                        std::to_string(tx) + "," + fd(grid.frequency_hz(f)) + "," +
                                        fd(20.0 * std::log10(mag)) + "\n";
                        }
                    }
            }
            emit("rician.csv", rician);
            emit("pdp.csv", pdp_csv);
            emit("coherence.csv", coh_csv);
            emit("transfer.csv", transfer);
        }

        // path loss fit when the campaign spans several link distances
        {
            std::set<double> distances;
            for (const SweepRecord &rec : campaign.records)
                distances.insert(rec.condition.d_link_m);
            if (distances.size() >= 2)
            {
                const std::vector<PathLossSample> samples = path_loss_samples(campaign);
                const PathLossModel model = fit_path_loss(samples, *distances.begin());
                std::string sample_csv = "distance_m,loss_db\n";
                for (const PathLossSample &s : samples)
                    sample_csv += fd(s.distance_m) + "," + fd(s.loss_db) + "\n";
                emit("pathloss_samples.csv", sample_csv);
                std::string fit = "key,value\n";
                fit += "pl_d0_db," + fd(model.pl_d0_db) + "\n";
                fit += "d0_m," + fd(model.d0_m) + "\n";
                fit += "alpha," + fd(model.alpha) + "\n";
                fit += "sigma_db," + fd(model.sigma_db) + "\n";
                emit("pathloss_fit.csv", fit);
            }
        }

        // metadata block
        {
            std::string meta = "key,value\n";
            meta += "format_version," + std::to_string(io::kFormatVersion) + "\n";
            meta += "n_records," + std::to_string(campaign.records.size()) + "\n";
            meta += "n_points," + std::to_string(grid.n_points) + "\n";
            meta += "f_start_hz," + fd(grid.f_start_hz) + "\n";
            meta += "f_stop_hz," + fd(grid.f_stop_hz) + "\n";
            meta += "bandwidth_hz," + fd(grid.bandwidth_hz()) + "\n";
            meta += "frequency_resolution_hz," + fd(grid.spacing_hz()) + "\n";
            meta += "delay_resolution_s," + fd(grid.delay_resolution_s()) + "\n";
            meta += "n_tx," + std::to_string(n_tx) + "\n";
            meta += "n_rx," + std::to_string(n_rx) + "\n";
            meta += "rho_list," + detail::joined(rho_list) + "\n";
            meta += "pdp_threshold_db," + fd(pdp_threshold_db) + "\n";
            meta += "window," + std::string(cavitylink::window_name(window)) + "\n";
            meta += "eigen_gap_db_at_10pct," + detail::joined(eigen_gaps) + "\n";
            emit("meta.csv", meta);
        }

        std::cout << "analyzed " << campaign.records.size() << " records into " << out_dir << "\n";
        return 0;
    }

    inline int cmd_capacity_stats(const std::string &campaign_path, const std::string &out_dir,
                                  std::vector<double> rho_list, double prominence)
    {
        namespace fs = std::filesystem;
        const Campaign campaign = io::read_campaign(campaign_path);
        if (rho_list.empty())
            rho_list.push_back(10.0);

        fs::create_directories(out_dir);
        const auto emit = [&](const std::string &name, const std::string &content) {
            io::detail::atomic_write_text(fs::path(out_dir) / name, content);
        };
        const auto fd = detail::format_double_short;

        std::vector<int> levels;
        for (const SweepRecord &rec : campaign.records)
            if (std::find(levels.begin(), levels.end(), rec.condition.n_cones) == levels.end())
                levels.push_back(rec.condition.n_cones);
        std::sort(levels.begin(), levels.end());

        std::string samples_csv = "n_cones,stirrer,rho,capacity_bps_hz\n";
        std::string density_csv = "n_cones,rho,support,density\n";
        std::string modes_csv = "n_cones,rho,n_modes,peak_locations\n";
        for (double rho : rho_list)
            for (int level : levels)
            {
                const std::vector<double> samples = capacity_samples(campaign, rho, level);
                std::size_t s = 0;
                for (const SweepRecord &rec : campaign.records)
                    if (rec.condition.n_cones == level)
                        samples_csv += std::to_string(level) + "," +
                                       std::to_string(rec.condition.stirrer_index) + "," + fd(rho) +
                                       "," + fd(samples[s++]) + "\n";
                if (samples.size() < 2 ||
                    *std::max_element(samples.begin(), samples.end()) ==
                        *std::min_element(samples.begin(), samples.end()))
                {
                    std::cerr << "skipping density for " << level
                              << " cones (need >= 2 spread-out samples)\n";
                    continue;
                }
                const DensityEstimate density = estimate_density(samples);
                for (std::size_t i = 0; i < density.support.size(); ++i)
                    density_csv += std::to_string(level) + "," + fd(rho) + "," +
                                   fd(density.support[i]) + "," + fd(density.density[i]) + "\n";
                const ModeReport modes = detect_modes(density, prominence);
                std::vector<double> locations;
                for (const ModePeak &p : modes.peaks)
                    locations.push_back(p.location);
                modes_csv += std::to_string(level) + "," + fd(rho) + "," +
                             std::to_string(modes.count) + "," + detail::joined(locations) + "\n";
            }
        emit("capacity_samples.csv", samples_csv);
        emit("density.csv", density_csv);
        emit("modes.csv", modes_csv);

        std::string curve_csv = "rx,tx,n_cones,mean,variance,n_samples\n";
        if (levels.size() >= 2)
        {
            for (const LoadingCurve &curve : gain_stats_vs_loading(campaign))
                for (const LoadingPoint &p : curve.points)
                    curve_csv += std::to_string(curve.rx) + "," + std::to_string(curve.tx) + "," +
                                 std::to_string(p.n_cones) + "," + fd(p.mean) + "," +
                                 (p.variance ? fd(*p.variance) : std::string{}) + "," +
                                 std::to_string(p.n_samples) + "\n";
        }
        else
        {
            std::cerr << "skipping loading curves (campaign has a single loading level)\n";
        }
        emit("loading_curve.csv", curve_csv);

        std::cout << "capacity statistics for " << levels.size() << " loading level(s) written to "
                  << out_dir << "\n";
        return 0;
    }

    inline int run(int argc, const char *const *argv)
    {
        CLI::App app{"MIMO channel statistics toolkit for mode-stirred enclosures"};
        app.require_subcommand(1);

        // synth
        auto *synth = app.add_subcommand("synth", "generate a synthetic campaign file");
        std::string synth_config, synth_out, synth_seed;
        int synth_threads = 1;
        synth->add_option("--config", synth_config, "configuration file (key=value)");
        synth->add_option("--out", synth_out, "output campaign file")->required();
        synth->add_option("--seed", synth_seed, "override the configured seed");
        synth->add_option("--threads", synth_threads, "worker threads (result is identical)")
            ->check(CLI::PositiveNumber);

        // validate
        auto *validate = app.add_subcommand("validate", "list campaign invariant violations");
        std::string validate_path;
        validate->add_option("campaign", validate_path, "campaign file")->required();

        // analyze
        auto *analyze = app.add_subcommand("analyze", "extract channel metrics into CSV files");
        std::string analyze_path, analyze_out, analyze_window = "rectangular";
        std::vector<double> analyze_rho;
        double analyze_pdp_threshold = 30.0;
        analyze->add_option("campaign", analyze_path, "campaign file")->required();
        analyze->add_option("--out-dir", analyze_out, "output directory")->required();
        analyze->add_option("--rho", analyze_rho, "linear SNR per receive antenna (repeatable)");
        analyze->add_option("--pdp-threshold-db", analyze_pdp_threshold,
                            "PDP threshold below peak in dB");
        analyze->add_option("--window", analyze_window, "PDP window")
            ->check(CLI::IsMember({"rectangular", "hann"}));

        // capacity-stats
        auto *cstats = app.add_subcommand("capacity-stats", "capacity distribution statistics");
        std::string cstats_path, cstats_out;
        std::vector<double> cstats_rho;
        double cstats_prominence = 0.1;
        cstats->add_option("campaign", cstats_path, "campaign file")->required();
        cstats->add_option("--out-dir", cstats_out, "output directory")->required();
        cstats->add_option("--rho", cstats_rho, "linear SNR per receive antenna (repeatable)");
        cstats->add_option("--prominence", cstats_prominence, "mode detection prominence fraction");

        // report
        auto *report_cmd = app.add_subcommand("report", "render SVG figures from metric CSVs");
        std::string report_metrics, report_out;
        report_cmd->add_option("--metrics-dir", report_metrics, "directory with metric CSVs")
            ->required();
        report_cmd->add_option("--out-dir", report_out, "output directory for SVG files")
            ->required();

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            std::cout << app.help();
            return 0;
        }
        catch (const CLI::ParseError &e)
        {
            std::cerr << e.what() << "\n\n" << app.help();
            return 2;
        }

        try
        {
            if (synth->parsed())
                return cmd_synth(synth_config, synth_out, synth_seed, synth_threads);
            if (validate->parsed())
                return cmd_validate(validate_path);
            if (analyze->parsed())
                return cmd_analyze(analyze_path, analyze_out, analyze_rho, analyze_pdp_threshold,
                                   analyze_window);
            if (cstats->parsed())
                return cmd_capacity_stats(cstats_path, cstats_out, cstats_rho, cstats_prominence);
            if (report_cmd->parsed())
            {
                report::render_report(report_metrics, report_out);
                std::cout << "rendered figures into " << report_out << "\n";
                return 0;
            }
        }
        catch (const std::exception &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        return 2;
    }

    // Convenience entry point for tests; args exclude the program name.
    inline int run(const std::vector<std::string> &args)
    {
        std::vector<std::string> argv_storage;
        argv_storage.push_back("cavitylink");
        argv_storage.insert(argv_storage.end(), args.begin(), args.end());
        std::vector<const char *> argv;
        for (const std::string &a : argv_storage)
            argv.push_back(a.c_str());
        return run(static_cast<int>(argv.size()), argv.data());
    }

} // namespace cavitylink::cli

#endif

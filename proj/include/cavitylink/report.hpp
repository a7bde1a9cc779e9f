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
// Turns the CSV outputs of `analyze` and `capacity-stats` into SVG figures:
// transfer-function magnitudes, eigenvalue CDFs, PDP, coherence curves,
// capacity densities per loading, and the gain mean/variance loading sweeps.

#ifndef CAVITYLINK_REPORT_HPP
#define CAVITYLINK_REPORT_HPP

#include "cavitylink/io.hpp"
#include "cavitylink/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cavitylink::report
{
    namespace detail
    {
        struct CsvTable
        {
            std::vector<std::string> columns;
            std::vector<std::vector<std::string>> rows;

            std::size_t column(const std::string &name) const
            {
                for (std::size_t i = 0; i < columns.size(); ++i)
                    if (columns[i] == name)
                        return i;
                throw std::runtime_error("metric file lacks column '" + name + "'");
            }
        };

        inline CsvTable load_csv(const std::filesystem::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw std::runtime_error("missing metric file '" + path.string() + "'");
            CsvTable table;
            std::string line;
            int line_no = 0;
            while (std::getline(in, line))
            {
                ++line_no;
                if (line.empty())
                    continue;
                std::vector<std::string> fields;
                for (std::string_view f : io::detail::split_csv(line))
                    fields.emplace_back(f);
                if (line_no == 1)
                    table.columns = std::move(fields);
                else
                    table.rows.push_back(std::move(fields));
            }
            if (table.columns.empty())
                throw std::runtime_error("metric file '" + path.string() + "' is empty");
            return table;
        }

        inline double num(const std::string &s)
        {
            return io::detail::parse_double(s, 0);
        }

        inline int lowest_cone_level(const CsvTable &t, std::size_t cones_col)
        {
            int lo = std::numeric_limits<int>::max();
            for (const auto &row : t.rows)
                lo = std::min(lo, static_cast<int>(num(row[cones_col])));
            return lo;
        }

        // Groups rows matching `filter` into one series per (rx,tx) pair.
        inline std::vector<svg::Series> subchannel_series(
            const CsvTable &t, const std::string &x_col, const std::string &y_col,
            int cones_filter, double x_scale, bool y_db)
        {
            const std::size_t ci = t.column("n_cones");
            const std::size_t ri = t.column("rx");
            const std::size_t ti = t.column("tx");
            const std::size_t xi = t.column(x_col);
            const std::size_t yi = t.column(y_col);

            std::map<std::pair<int, int>, svg::Series> by_pair;
            for (const auto &row : t.rows)
            {
                if (static_cast<int>(num(row[ci])) != cones_filter)
                    continue;
                const int rx = static_cast<int>(num(row[ri]));
                const int tx = static_cast<int>(num(row[ti]));
                auto &series = by_pair[{rx, tx}];
                if (series.label.empty())
                    series.label = "rx" + std::to_string(rx) + " tx" + std::to_string(tx);
                double y = num(row[yi]);
                if (y_db)
                    y = y > 0.0 ? 10.0 * std::log10(y) : std::numeric_limits<double>::quiet_NaN();
                series.x.push_back(num(row[xi]) * x_scale);
                series.y.push_back(y);
            }
            std::vector<svg::Series> out;
            for (auto &[key, series] : by_pair)
                out.push_back(std::move(series));
            return out;
        }
    } // namespace detail

    // Renders every figure from the metric CSVs in metrics_dir into out_dir.
    // Output is deterministic; rendering twice gives byte-identical files.
    inline void render_report(const std::filesystem::path &metrics_dir,
                              const std::filesystem::path &out_dir)
    {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);

        const auto write = [&](const std::string &name, const std::string &content) {
            io::detail::atomic_write_text(out_dir / name, content);
        };

        // transfer-function magnitudes at the lightest loading
        {
            const auto t = detail::load_csv(metrics_dir / "transfer.csv");
            const int cones = detail::lowest_cone_level(t, t.column("n_cones"));
            svg::PlotSpec spec;
            spec.title = "Subchannel transfer magnitude (" + std::to_string(cones) + " cones)";
            spec.x_label = "frequency [GHz]";
            spec.y_label = "|H| [dB]";
            auto series = detail::subchannel_series(t, "f_hz", "mag_db", cones, 1e-9, false);
            write("transfer_magnitude.svg", svg::render_line_plot(spec, series));
        }

        // eigenvalue CDFs pooled over the campaign
        {
            const auto t = detail::load_csv(metrics_dir / "eigenvalues.csv");
            const std::size_t ii = t.column("eigen_index");
            const std::size_t li = t.column("lambda_db");
            const std::size_t pi = t.column("cum_prob");
            std::map<int, svg::Series> by_index;
            for (const auto &row : t.rows)
            {
                const int idx = static_cast<int>(detail::num(row[ii]));
                auto &series = by_index[idx];
                if (series.label.empty())
                    series.label = "lambda " + std::to_string(idx + 1);
                series.x.push_back(detail::num(row[li]));
                series.y.push_back(detail::num(row[pi]));
            }
            std::vector<svg::Series> series;
            for (auto &[k, s] : by_index)
                series.push_back(std::move(s));
            svg::PlotSpec spec;
            spec.title = "Eigenvalue empirical CDF";
            spec.x_label = "10 log10(lambda) [dB]";
            spec.y_label = "probability";
            write("eigenvalue_cdf.svg", svg::render_line_plot(spec, series));
        }

        // ensemble-mean power delay profile at the lightest loading
        {
            const auto t = detail::load_csv(metrics_dir / "pdp.csv");
            const int cones = detail::lowest_cone_level(t, t.column("n_cones"));
            svg::PlotSpec spec;
            spec.title = "Power delay profile (" + std::to_string(cones) + " cones)";
            spec.x_label = "delay [ns]";
            spec.y_label = "power [dB]";
            auto series = detail::subchannel_series(t, "delay_s", "power", cones, 1e9, true);
            write("pdp.svg", svg::render_line_plot(spec, series));
        }

        // coherence curves at the lightest loading
        {
            const auto t = detail::load_csv(metrics_dir / "coherence.csv");
            const int cones = detail::lowest_cone_level(t, t.column("n_cones"));
            svg::PlotSpec spec;
            spec.title = "Frequency autocorrelation (" + std::to_string(cones) + " cones)";
            spec.x_label = "lag [MHz]";
            spec.y_label = "|R|";
            auto series = detail::subchannel_series(t, "lag_hz", "abs_corr", cones, 1e-6, false);
            write("coherence.svg", svg::render_line_plot(spec, series));
        }

        // capacity densities, one labeled curve per loading, first rho in file
        {
            const auto t = detail::load_csv(metrics_dir / "density.csv");
            const std::size_t ci = t.column("n_cones");
            const std::size_t rhoi = t.column("rho");
            const std::size_t si = t.column("support");
            const std::size_t di = t.column("density");
            if (t.rows.empty())
                throw std::runtime_error("metric file 'density.csv' has no rows");
            const double rho0 = detail::num(t.rows.front()[rhoi]);
            std::map<int, svg::Series> by_cones;
            for (const auto &row : t.rows)
            {
                if (detail::num(row[rhoi]) != rho0)
                    continue;
                const int cones = static_cast<int>(detail::num(row[ci]));
                auto &series = by_cones[cones];
                if (series.label.empty())
                    series.label = std::to_string(cones) + " cones";
                series.x.push_back(detail::num(row[si]));
                series.y.push_back(detail::num(row[di]));
            }
            std::vector<svg::Series> series;
            for (auto &[k, s] : by_cones)
                series.push_back(std::move(s));
            svg::PlotSpec spec;
            spec.title = "Capacity density (rho=" + io::detail::format_double_short(rho0) + ")";
            spec.x_label = "capacity [bits/s/Hz]";
            spec.y_label = "density";
            write("capacity_pdf.svg", svg::render_line_plot(spec, series));
        }

        // band-averaged gain mean and variance versus loading
        {
            const auto t = detail::load_csv(metrics_dir / "loading_curve.csv");
            const std::size_t ri = t.column("rx");
            const std::size_t ti = t.column("tx");
            const std::size_t ci = t.column("n_cones");
            const std::size_t mi = t.column("mean");
            const std::size_t vi = t.column("variance");

            std::set<double> cone_ticks;
            std::map<std::pair<int, int>, svg::Series> mean_series, var_series;
            for (const auto &row : t.rows)
            {
                const int rx = static_cast<int>(detail::num(row[ri]));
                const int tx = static_cast<int>(detail::num(row[ti]));
                const double cones = detail::num(row[ci]);
                cone_ticks.insert(cones);
                const std::string label = "rx" + std::to_string(rx) + " tx" + std::to_string(tx);
                auto &ms = mean_series[{rx, tx}];
                if (ms.label.empty())
                    ms.label = label;
                ms.x.push_back(cones);
                ms.y.push_back(detail::num(row[mi]));
                if (!row[vi].empty())
                {
                    auto &vs = var_series[{rx, tx}];
                    if (vs.label.empty())
                        vs.label = label;
                    vs.x.push_back(cones);
                    vs.y.push_back(detail::num(row[vi]));
                }
            }
            std::vector<double> ticks(cone_ticks.begin(), cone_ticks.end());

            svg::PlotSpec mean_spec;
            mean_spec.title = "Band-averaged gain mean vs loading";
            mean_spec.x_label = "absorber cones";
            mean_spec.y_label = "mean gain";
            mean_spec.x_ticks = ticks;
            std::vector<svg::Series> ms;
            for (auto &[k, s] : mean_series)
                ms.push_back(std::move(s));
            write("gain_mean_vs_cones.svg", svg::render_line_plot(mean_spec, ms));

            svg::PlotSpec var_spec;
            var_spec.title = "Band-averaged gain variance vs loading";
            var_spec.x_label = "absorber cones";
            var_spec.y_label = "gain variance";
            var_spec.x_ticks = ticks;
            std::vector<svg::Series> vs;
            for (auto &[k, s] : var_series)
                vs.push_back(std::move(s));
            write("gain_variance_vs_cones.svg", svg::render_line_plot(var_spec, vs));
        }
    }

} // namespace cavitylink::report

#endif

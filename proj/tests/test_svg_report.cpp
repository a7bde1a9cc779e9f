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

#include <catch2/catch.hpp>

#include "cavitylink/report.hpp"
#include "cavitylink/svg.hpp"
#include "test_helpers.hpp"

#include <fstream>
#include <sstream>

using namespace cavitylink;

namespace
{
    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    std::size_t count_occurrences(const std::string &text, const std::string &needle)
    {
        std::size_t count = 0, pos = 0;
        while ((pos = text.find(needle, pos)) != std::string::npos)
        {
            ++count;
            pos += needle.size();
        }
        return count;
    }

    void write_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary);
        REQUIRE(out);
        out << content;
    }

    // minimal coherent metric CSV set with two loading levels
    void write_metric_fixtures(const std::filesystem::path &dir)
    {
        write_file(dir / "transfer.csv", "n_cones,rx,tx,f_hz,mag_db\n"
                                         "0,0,0,5.5e9,-10\n0,0,0,5.6e9,-12\n0,0,0,5.7e9,-11\n"
                                         "0,0,1,5.5e9,-14\n0,0,1,5.6e9,-13\n0,0,1,5.7e9,-15\n"
                                         "4,0,0,5.5e9,-20\n4,0,0,5.6e9,-22\n4,0,0,5.7e9,-21\n");
        write_file(dir / "eigenvalues.csv", "eigen_index,lambda_db,cum_prob\n"
                                            "0,-3,0.25\n0,-1,0.75\n1,-9,0.25\n1,-6,0.75\n");
        write_file(dir / "pdp.csv", "n_cones,rx,tx,delay_s,power\n"
                                    "0,0,0,0,1\n0,0,0,5e-9,0.5\n0,0,0,1e-8,0.25\n"
                                    "4,0,0,0,0.5\n4,0,0,5e-9,0.2\n4,0,0,1e-8,0.05\n");
        write_file(dir / "coherence.csv", "n_cones,rx,tx,lag_hz,abs_corr\n"
                                          "0,0,0,0,1\n0,0,0,4e5,0.8\n0,0,0,8e5,0.5\n"
                                          "4,0,0,0,1\n4,0,0,4e5,0.9\n4,0,0,8e5,0.7\n");
        write_file(dir / "density.csv", "n_cones,rho,support,density\n"
                                        "0,10,4.0,0.1\n0,10,4.5,0.9\n0,10,5.0,0.1\n"
                                        "4,10,3.0,0.2\n4,10,3.5,0.8\n4,10,4.0,0.2\n");
        // mean values chosen so no y tick label collides with the cone digits
        write_file(dir / "loading_curve.csv", "rx,tx,n_cones,mean,variance,n_samples\n"
                                              "0,0,0,1000,250,10\n0,0,2,800,160,10\n"
                                              "0,0,4,600,90,10\n0,0,8,400,40,10\n");
    }
} // namespace

// ================================================================================================
// SECTION 1: svg primitives
// ================================================================================================

TEST_CASE("SVG - render is deterministic")
{
    svg::PlotSpec spec;
    spec.title = "title";
    spec.x_label = "x";
    spec.y_label = "y";
    std::vector<svg::Series> series{{"a", {0, 1, 2}, {1.5, -0.5, 2.25}},
                                    {"b", {0, 1, 2}, {0.5, 0.75, 0.25}}};
    const std::string one = svg::render_line_plot(spec, series);
    const std::string two = svg::render_line_plot(spec, series);
    REQUIRE(one == two);
    REQUIRE(count_occurrences(one, "<polyline") == 2);
    REQUIRE_THAT(one, Catch::Contains(">a</text>"));
    REQUIRE_THAT(one, Catch::Contains(">b</text>"));
    REQUIRE_THAT(one, !Catch::Contains("nan"));
}

TEST_CASE("SVG - explicit x ticks are honored verbatim")
{
    svg::PlotSpec spec;
    spec.title = "loading";
    spec.x_label = "cones";
    spec.y_label = "gain";
    spec.x_ticks = std::vector<double>{0, 2, 4, 8};
    // y values chosen so no y tick label collides with a single digit
    std::vector<svg::Series> series{{"s", {0, 2, 4, 8}, {400.0, 700.0, 600.0, 500.0}}};
    const std::string out = svg::render_line_plot(spec, series);
    for (const char *tick : {">0</text>", ">2</text>", ">4</text>", ">8</text>"})
        REQUIRE_THAT(out, Catch::Contains(tick));
    // no auto ticks between the requested ones
    REQUIRE_THAT(out, !Catch::Contains(">1</text>"));
    REQUIRE_THAT(out, !Catch::Contains(">3</text>"));
    REQUIRE_THAT(out, !Catch::Contains(">6</text>"));
}

TEST_CASE("SVG - non-finite samples break the polyline instead of rendering")
{
    svg::PlotSpec spec;
    spec.title = "gap";
    std::vector<svg::Series> series{
        {"s", {0, 1, 2, 3, 4}, {1.0, 2.0, std::nan(""), 3.0, 4.0}}};
    const std::string out = svg::render_line_plot(spec, series);
    REQUIRE(count_occurrences(out, "<polyline") == 2);
}

// ================================================================================================
// SECTION 2: render_report
// ================================================================================================

TEST_CASE("Report - renders every figure deterministically")
{
    const auto dir = testutil::scratch_dir("report_fixtures");
    write_metric_fixtures(dir);

    const auto out1 = testutil::scratch_dir("report_out1");
    const auto out2 = testutil::scratch_dir("report_out2");
    report::render_report(dir, out1);
    report::render_report(dir, out2);

    const char *names[] = {"transfer_magnitude.svg", "eigenvalue_cdf.svg",   "pdp.svg",
                           "coherence.svg",          "capacity_pdf.svg",     "gain_mean_vs_cones.svg",
                           "gain_variance_vs_cones.svg"};
    for (const char *name : names)
    {
        REQUIRE(std::filesystem::exists(out1 / name));
        REQUIRE(read_file(out1 / name) == read_file(out2 / name));
    }
}

TEST_CASE("Report - capacity density renders one labeled curve per loading")
{
    const auto dir = testutil::scratch_dir("report_density");
    write_metric_fixtures(dir);
    const auto out = testutil::scratch_dir("report_density_out");
    report::render_report(dir, out);

    const std::string pdf = read_file(out / "capacity_pdf.svg");
    REQUIRE(count_occurrences(pdf, "<polyline") == 2);
    REQUIRE_THAT(pdf, Catch::Contains("0 cones"));
    REQUIRE_THAT(pdf, Catch::Contains("4 cones"));
}

TEST_CASE("Report - loading curve x axis ticks sit exactly on the cone counts")
{
    const auto dir = testutil::scratch_dir("report_ticks");
    write_metric_fixtures(dir);
    const auto out = testutil::scratch_dir("report_ticks_out");
    report::render_report(dir, out);

    const std::string mean_svg = read_file(out / "gain_mean_vs_cones.svg");
    for (const char *tick : {">0</text>", ">2</text>", ">4</text>", ">8</text>"})
        REQUIRE_THAT(mean_svg, Catch::Contains(tick));
    REQUIRE_THAT(mean_svg, !Catch::Contains(">1</text>"));
    REQUIRE_THAT(mean_svg, !Catch::Contains(">6</text>"));
}

TEST_CASE("Report - missing metric file is named in the error")
{
    const auto dir = testutil::scratch_dir("report_missing");
    write_metric_fixtures(dir);
    std::filesystem::remove(dir / "coherence.csv");
    const auto out = testutil::scratch_dir("report_missing_out");
    REQUIRE_THROWS_WITH(report::render_report(dir, out), Catch::Contains("coherence.csv"));
}

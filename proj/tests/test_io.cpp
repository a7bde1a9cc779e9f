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

#include "cavitylink/io.hpp"
#include "test_helpers.hpp"

#include <fstream>
#include <sstream>

using namespace cavitylink;

namespace
{
    Campaign parse_text(const std::string &text, std::vector<Violation> *structural = nullptr)
    {
        std::istringstream in(text);
        return io::parse_campaign(in, structural);
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
} // namespace

// ================================================================================================
// SECTION 1: campaign round trips
// ================================================================================================

TEST_CASE("Campaign IO - minimal file has header plus two data rows")
{
    const FrequencyGrid grid{1e9, 2e9, 2};
    ChannelMatrix m(1, 1);
    m(0, 0) = Complex(0.5, -0.25);
    Campaign campaign;
    campaign.records.push_back(testutil::constant_sweep(grid, m));

    const std::string text = io::campaign_to_string(campaign);
    int header_lines = 0, data_lines = 0;
    bool saw_columns = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line[0] == '#')
            ++header_lines;
        else if (line == std::string(io::kColumnHeader))
            saw_columns = true;
        else if (!line.empty())
            ++data_lines;
    }
    REQUIRE(saw_columns);
    REQUIRE(header_lines >= 6);
    REQUIRE(data_lines == 2);
}

TEST_CASE("Campaign IO - read(write(c)) reproduces the campaign exactly")
{
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
    {
        const Campaign campaign = testutil::random_campaign(seed, 3, 6, 2, 2);
        const Campaign back = parse_text(io::campaign_to_string(campaign));
        REQUIRE(back.records.size() == campaign.records.size());
        REQUIRE(back.metadata == campaign.metadata);
        for (std::size_t r = 0; r < campaign.records.size(); ++r)
        {
            REQUIRE(back.records[r].condition == campaign.records[r].condition);
            REQUIRE(back.records[r].grid == campaign.records[r].grid);
            for (std::size_t k = 0; k < campaign.records[r].matrices.size(); ++k)
                REQUIRE(back.records[r].matrices[k] == campaign.records[r].matrices[k]);
        }
    }
}

TEST_CASE("Campaign IO - write-read-write is byte identical")
{
    const Campaign campaign = testutil::random_campaign(99, 2, 5, 2, 1);
    const std::string first = io::campaign_to_string(campaign);
    const std::string second = io::campaign_to_string(parse_text(first));
    REQUIRE(first == second);
}

TEST_CASE("Campaign IO - file round trip through the filesystem")
{
    const auto dir = testutil::scratch_dir("io_roundtrip");
    const Campaign campaign = testutil::random_campaign(7, 2, 4);
    io::write_campaign(campaign, dir / "c.csv");
    const Campaign back = io::read_campaign(dir / "c.csv");
    for (std::size_t r = 0; r < campaign.records.size(); ++r)
        for (std::size_t k = 0; k < campaign.records[r].matrices.size(); ++k)
            REQUIRE(back.records[r].matrices[k] == campaign.records[r].matrices[k]);

    io::write_campaign(back, dir / "c2.csv");
    REQUIRE(read_file(dir / "c.csv") == read_file(dir / "c2.csv"));
}

TEST_CASE("Campaign IO - row count matches the reference campaign shape")
{
    // 40 records x 501 points x 2x2 entries = 80160 data rows
    CavityConfig config;
    config.n_taps = 4; // keep synthesis cheap; the shape is what matters
    const Campaign campaign = synth_campaign(config, 4);
    REQUIRE(campaign.records.size() == 40);

    const std::string text = io::campaign_to_string(campaign);
    std::size_t data_rows = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line != std::string(io::kColumnHeader))
            ++data_rows;
    REQUIRE(data_rows == 80160);
}

// ================================================================================================
// SECTION 2: parse and validation errors
// ================================================================================================

TEST_CASE("Campaign IO - malformed row names the line")
{
    const Campaign campaign = testutil::random_campaign(11, 1, 3, 1, 1);
    std::string text = io::campaign_to_string(campaign);
    const std::size_t pos = text.rfind("\n", text.size() - 2);
    text = text.substr(0, pos + 1) + "0,0,0,zap,0.05,0.05,1e9,0,0,1,0\n";
    try
    {
        parse_text(text);
        FAIL("expected a parse error");
    }
    catch (const std::runtime_error &e)
    {
        REQUIRE_THAT(e.what(), Catch::Contains("line "));
        REQUIRE_THAT(e.what(), Catch::Contains("zap"));
    }
}

TEST_CASE("Campaign IO - header n_points mismatch is a validation error")
{
    const Campaign campaign = testutil::random_campaign(12, 1, 4, 1, 1);
    std::string text = io::campaign_to_string(campaign);
    const std::size_t pos = text.find("# n_points=4");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("# n_points=4").size(), "# n_points=5");

    std::vector<Violation> structural;
    const Campaign parsed = parse_text(text, &structural);
    const auto invariant = validate_campaign(parsed);
    REQUIRE((structural.size() + invariant.size()) > 0);

    std::istringstream in(text);
    REQUIRE_THROWS_AS(io::parse_campaign(in), io::CampaignValidationError);
}

TEST_CASE("Campaign IO - truncated body is flagged")
{
    const Campaign campaign = testutil::random_campaign(13, 1, 4, 1, 1);
    std::string text = io::campaign_to_string(campaign);
    text.erase(text.rfind('\n', text.size() - 2) + 1); // drop the last row
    std::vector<Violation> structural;
    parse_text(text, &structural);
    REQUIRE_FALSE(structural.empty());
}

TEST_CASE("Campaign IO - unknown header key and missing header throw")
{
    REQUIRE_THROWS_WITH(parse_text("# format_version=1\n# oddball=3\n"),
                        Catch::Contains("oddball"));
    REQUIRE_THROWS_WITH(parse_text("# format_version=1\nrecord_id\n"),
                        Catch::Contains("incomplete header"));
}

TEST_CASE("Campaign IO - CRLF line endings parse identically")
{
    const Campaign campaign = testutil::random_campaign(21, 1, 3, 1, 1);
    std::string text = io::campaign_to_string(campaign);
    std::string crlf;
    for (char c : text)
    {
        if (c == '\n')
            crlf += '\r';
        crlf += c;
    }
    const Campaign back = parse_text(crlf);
    for (std::size_t k = 0; k < campaign.records[0].matrices.size(); ++k)
        REQUIRE(back.records[0].matrices[k] == campaign.records[0].matrices[k]);
}

TEST_CASE("Campaign IO - missing file errors mention the path")
{
    REQUIRE_THROWS_WITH(io::read_campaign("/nonexistent/campaign.csv"),
                        Catch::Contains("/nonexistent/campaign.csv"));
}

// ================================================================================================
// SECTION 3: configuration files
// ================================================================================================

TEST_CASE("Config - defaults reproduce the reference setup")
{
    std::istringstream in("");
    const CavityConfig config = io::parse_config(in);
    REQUIRE(config.grid.f_start_hz == 5.50e9);
    REQUIRE(config.grid.f_stop_hz == 5.70e9);
    REQUIRE(config.grid.n_points == 501);
    REQUIRE(config.grid.spacing_hz() == 400e3);
    REQUIRE(config.n_stirrer == 10);
    REQUIRE(config.cone_levels == std::vector<int>{0, 2, 4, 8});
    REQUIRE(config.n_rx == 2);
    REQUIRE(config.n_tx == 2);
    REQUIRE_FALSE(config.noise_floor_db.has_value());
}

TEST_CASE("Config - keys parse and comments are ignored")
{
    std::istringstream in("# comment line\n"
                          "n_points=101\n"
                          "cone_levels=0,1,3\n"
                          "tau0_s=2.5e-7\n"
                          "k_target=4\n"
                          "seed=999\n"
                          "noise_floor_db=-45\n"
                          "\n");
    const CavityConfig config = io::parse_config(in);
    REQUIRE(config.grid.n_points == 101);
    REQUIRE(config.cone_levels == std::vector<int>{0, 1, 3});
    REQUIRE(config.tau0_s == 2.5e-7);
    REQUIRE(config.k_target == 4.0);
    REQUIRE(config.seed == 999);
    REQUIRE(config.noise_floor_db.has_value());
    REQUIRE(*config.noise_floor_db == -45.0);
}

TEST_CASE("Config - unknown keys and invalid values are rejected")
{
    std::istringstream bad_key("tau_zero=1\n");
    REQUIRE_THROWS_WITH(io::parse_config(bad_key), Catch::Contains("tau_zero"));

    std::istringstream bad_value("tau0_s=-1\n");
    REQUIRE_THROWS_AS(io::parse_config(bad_value), std::invalid_argument);

    std::istringstream no_equals("n_points 5\n");
    REQUIRE_THROWS_AS(io::parse_config(no_equals), std::runtime_error);
}

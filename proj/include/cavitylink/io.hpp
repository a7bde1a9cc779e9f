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
// Campaign file format (UTF-8 text, version 1):
//
//   # format_version=1
//   # f_start_hz=<decimal>
//   # f_stop_hz=<decimal>
//   # n_points=<int>
//   # n_tx=<int>
//   # n_rx=<int>
//   # meta.<key>=<value>            (free-form metadata, sorted by key)
//   record_id,stirrer,n_cones,d_link_m,d_tx_m,d_rx_m,f_hz,rx,tx,re,im
//   <rows, one per (record, frequency, rx, tx), in that nesting order>
//
// Doubles are written with 17 significant digits, so read(write(c)) == c
// exactly and write(read(write(c))) is byte-identical. Files are written to a
// temporary sibling and renamed into place.

#ifndef CAVITYLINK_IO_HPP
#define CAVITYLINK_IO_HPP

#include "cavitylink/cavity.hpp"
#include "cavitylink/channel.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cavitylink::io
{
    inline constexpr int kFormatVersion = 1;
    inline constexpr std::string_view kColumnHeader =
        "record_id,stirrer,n_cones,d_link_m,d_tx_m,d_rx_m,f_hz,rx,tx,re,im";

    struct CampaignFileHeader
    {
        int format_version = kFormatVersion;
        double f_start_hz = 0.0;
        double f_stop_hz = 0.0;
        int n_points = 0;
        int n_tx = 0;
        int n_rx = 0;
        std::map<std::string, std::string> metadata;
    };

    // Read errors that stem from the data violating campaign invariants rather
    // than from unparseable text; carries the full violation list.
    class CampaignValidationError : public std::runtime_error
    {
    public:
        explicit CampaignValidationError(std::vector<Violation> violations)
            : std::runtime_error(format(violations)), violations_(std::move(violations))
        {
        }
        const std::vector<Violation> &violations() const { return violations_; }

    private:
        static std::string format(const std::vector<Violation> &violations)
        {
            std::ostringstream os;
            os << "campaign violates " << violations.size() << " invariant(s):";
            for (const Violation &v : violations)
                os << "\n  [record " << v.record_index << "] " << v.message;
            return os.str();
        }
        std::vector<Violation> violations_;
    };

    namespace detail
    {
        inline std::string format_double(double v, int precision = 17)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                           std::chars_format::general, precision);
            return std::string(buf, res.ptr);
        }

        // Shortest representation that round-trips; used for report CSVs where
        // readability matters more than a fixed digit count.
        inline std::string format_double_short(double v)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }

        inline double parse_double(std::string_view token, int line_no)
        {
            double v = 0.0;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
            if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
                throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                         ": bad numeric field '" + std::string(token) + "'");
            return v;
        }

        inline long long parse_int(std::string_view token, int line_no)
        {
            long long v = 0;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
            if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
                throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                         ": bad integer field '" + std::string(token) + "'");
            return v;
        }

        inline std::vector<std::string_view> split_csv(std::string_view line)
        {
            std::vector<std::string_view> fields;
            std::size_t start = 0;
            while (true)
            {
                const std::size_t pos = line.find(',', start);
                if (pos == std::string_view::npos)
                {
                    fields.push_back(line.substr(start));
                    break;
                }
                fields.push_back(line.substr(start, pos - start));
                start = pos + 1;
            }
            return fields;
        }

        inline void atomic_write_text(const std::filesystem::path &destination, const std::string &text)
        {
            const std::filesystem::path tmp = destination.string() + ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
                out << text;
                if (!out.flush())
                    throw std::runtime_error("write failed for '" + tmp.string() + "'");
            }
            std::filesystem::rename(tmp, destination);
        }
    } // namespace detail

    inline std::string campaign_to_string(const Campaign &campaign)
    {
        if (campaign.records.empty())
            throw std::invalid_argument("write_campaign: campaign has no records");
        const FrequencyGrid &grid = campaign.records.front().grid;
        const int n_rx = campaign.records.front().n_rx();
        const int n_tx = campaign.records.front().n_tx();

        std::string out;
        out.reserve(64 * campaign.records.size() * static_cast<std::size_t>(grid.n_points));
        const auto line = [&out](const std::string &s) {
            out += s;
            out += '\n';
        };

        line("# format_version=" + std::to_string(kFormatVersion));
        line("# f_start_hz=" + detail::format_double(grid.f_start_hz));
        line("# f_stop_hz=" + detail::format_double(grid.f_stop_hz));
        line("# n_points=" + std::to_string(grid.n_points));
        line("# n_tx=" + std::to_string(n_tx));
        line("# n_rx=" + std::to_string(n_rx));
        for (const auto &[key, value] : campaign.metadata)
        {
            if (key.find_first_of("=\n") != std::string::npos ||
                value.find('\n') != std::string::npos)
                throw std::invalid_argument("write_campaign: metadata may not contain '=' in keys or newlines");
            line("# meta." + key + "=" + value);
        }
        line(std::string(kColumnHeader));

        for (std::size_t r = 0; r < campaign.records.size(); ++r)
        {
            const SweepRecord &rec = campaign.records[r];
            const ConditionTag &c = rec.condition;
            const std::string prefix = std::to_string(r) + "," + std::to_string(c.stirrer_index) +
                                       "," + std::to_string(c.n_cones) + "," +
                                       detail::format_double(c.d_link_m) + "," +
                                       detail::format_double(c.d_tx_m) + "," +
                                       detail::format_double(c.d_rx_m) + ",";
            for (int k = 0; k < grid.n_points; ++k)
            {
                const std::string f = detail::format_double(grid.frequency_hz(k));
                const ChannelMatrix &m = rec.matrices[static_cast<std::size_t>(k)];
                for (int rx = 0; rx < n_rx; ++rx)
                    for (int tx = 0; tx < n_tx; ++tx)
                    {
                        const Complex v = m(rx, tx);
                        line(prefix + f + "," + std::to_string(rx) + "," + std::to_string(tx) +
                             "," + detail::format_double(v.real()) + "," +
                             detail::format_double(v.imag()));
                    }
            }
        }
        return out;
    }

    inline void write_campaign(const Campaign &campaign, const std::filesystem::path &destination)
    {
        detail::atomic_write_text(destination, campaign_to_string(campaign));
    }

    // Parses without validating campaign invariants; header/body consistency
    // problems (row counts, ordering, grid mismatches) are reported as
    // violations so `validate` can list everything at once.
    inline Campaign parse_campaign(std::istream &in, std::vector<Violation> *structural = nullptr)
    {
        CampaignFileHeader header;
        bool saw_version = false, saw_fstart = false, saw_fstop = false;
        bool saw_npoints = false, saw_ntx = false, saw_nrx = false;

        std::string lineText;
        int line_no = 0;
        const auto strip_cr = [](std::string &s) {
            if (!s.empty() && s.back() == '\r')
                s.pop_back();
        };

        // header block
        while (in.peek() == '#')
        {
            std::getline(in, lineText);
            strip_cr(lineText);
            ++line_no;
            std::string_view lv(lineText);
            lv.remove_prefix(1);
            while (!lv.empty() && lv.front() == ' ')
                lv.remove_prefix(1);
            const std::size_t eq = lv.find('=');
            if (eq == std::string_view::npos)
                throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                         ": header line without '='");
            const std::string_view key = lv.substr(0, eq);
            const std::string_view value = lv.substr(eq + 1);
            if (key == "format_version")
            {
                header.format_version = static_cast<int>(detail::parse_int(value, line_no));
                saw_version = true;
            }
            else if (key == "f_start_hz")
            {
                header.f_start_hz = detail::parse_double(value, line_no);
                saw_fstart = true;
            }
            else if (key == "f_stop_hz")
            {
                header.f_stop_hz = detail::parse_double(value, line_no);
                saw_fstop = true;
            }
            else if (key == "n_points")
            {
                header.n_points = static_cast<int>(detail::parse_int(value, line_no));
                saw_npoints = true;
            }
            else if (key == "n_tx")
            {
                header.n_tx = static_cast<int>(detail::parse_int(value, line_no));
                saw_ntx = true;
            }
            else if (key == "n_rx")
            {
                header.n_rx = static_cast<int>(detail::parse_int(value, line_no));
                saw_nrx = true;
            }
            else if (key.substr(0, 5) == "meta.")
            {
                header.metadata[std::string(key.substr(5))] = std::string(value);
            }
            else
            {
                throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                         ": unknown header key '" + std::string(key) + "'");
            }
        }
        if (!(saw_version && saw_fstart && saw_fstop && saw_npoints && saw_ntx && saw_nrx))
            throw std::runtime_error("parse error: incomplete header block");
        if (header.format_version != kFormatVersion)
            throw std::runtime_error("unsupported format_version " +
                                     std::to_string(header.format_version));
        if (header.n_points < 2 || header.n_tx < 1 || header.n_rx < 1)
            throw std::runtime_error("parse error: header dimensions out of range");

        std::getline(in, lineText);
        strip_cr(lineText);
        ++line_no;
        if (lineText != kColumnHeader)
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": expected column header '" + std::string(kColumnHeader) + "'");

        FrequencyGrid grid{header.f_start_hz, header.f_stop_hz, header.n_points};

        struct Row
        {
            long long record_id;
            ConditionTag condition;
            double f_hz;
            int rx, tx;
            Complex value;
        };

        const auto structural_issue = [&](int record, std::string msg) {
            if (structural)
                structural->push_back({record, std::move(msg)});
            else
                throw CampaignValidationError({{record, std::move(msg)}});
        };

        Campaign campaign;
        campaign.metadata = header.metadata;

        const long long rows_per_record = static_cast<long long>(header.n_points) *
                                          header.n_rx * header.n_tx;
        long long row_index = 0;
        SweepRecord current;
        bool current_open = false;
        long long expected_record = 0;

        while (std::getline(in, lineText))
        {
            strip_cr(lineText);
            ++line_no;
            if (lineText.empty())
                continue;
            const auto fields = detail::split_csv(lineText);
            if (fields.size() != 11)
                throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                         ": expected 11 fields, got " +
                                         std::to_string(fields.size()));
            Row row;
            row.record_id = detail::parse_int(fields[0], line_no);
            row.condition.stirrer_index = static_cast<int>(detail::parse_int(fields[1], line_no));
            row.condition.n_cones = static_cast<int>(detail::parse_int(fields[2], line_no));
            row.condition.d_link_m = detail::parse_double(fields[3], line_no);
            row.condition.d_tx_m = detail::parse_double(fields[4], line_no);
            row.condition.d_rx_m = detail::parse_double(fields[5], line_no);
            row.f_hz = detail::parse_double(fields[6], line_no);
            row.rx = static_cast<int>(detail::parse_int(fields[7], line_no));
            row.tx = static_cast<int>(detail::parse_int(fields[8], line_no));
            row.value = {detail::parse_double(fields[9], line_no),
                         detail::parse_double(fields[10], line_no)};

            const long long in_record = row_index % rows_per_record;
            if (in_record == 0)
            {
                if (current_open)
                    campaign.records.push_back(std::move(current));
                current = SweepRecord{};
                current.grid = grid;
                current.condition = row.condition;
                current.matrices.assign(static_cast<std::size_t>(header.n_points),
                                        ChannelMatrix::Zero(header.n_rx, header.n_tx));
                current_open = true;
                if (row.record_id != expected_record)
                    structural_issue(static_cast<int>(expected_record),
                                     "line " + std::to_string(line_no) + ": record_id " +
                                         std::to_string(row.record_id) + " out of sequence");
                ++expected_record;
            }

            const int rec_no = static_cast<int>(campaign.records.size());
            const long long f_idx = in_record / (header.n_rx * header.n_tx);
            const long long within = in_record % (header.n_rx * header.n_tx);
            const int exp_rx = static_cast<int>(within / header.n_tx);
            const int exp_tx = static_cast<int>(within % header.n_tx);

            if (row.rx != exp_rx || row.tx != exp_tx)
                structural_issue(rec_no, "line " + std::to_string(line_no) +
                                             ": rx/tx out of canonical order");
            if (!(row.condition == current.condition))
                structural_issue(rec_no, "line " + std::to_string(line_no) +
                                             ": condition fields change within a record");
            const double expected_f = grid.frequency_hz(static_cast<int>(f_idx));
            const double f_tol = 1e-9 * std::max(1.0, std::abs(expected_f));
            if (std::abs(row.f_hz - expected_f) > f_tol)
                structural_issue(rec_no, "line " + std::to_string(line_no) +
                                             ": f_hz does not match the header grid");
            if (row.rx >= 0 && row.rx < header.n_rx && row.tx >= 0 && row.tx < header.n_tx)
                current.matrices[static_cast<std::size_t>(f_idx)](row.rx, row.tx) = row.value;
            ++row_index;
        }
        if (current_open)
        {
            if (row_index % rows_per_record != 0)
                structural_issue(static_cast<int>(campaign.records.size()),
                                 "row count is not a multiple of n_points*n_rx*n_tx (truncated file?)");
            campaign.records.push_back(std::move(current));
        }
        if (campaign.records.empty())
            throw std::runtime_error("parse error: file contains no data rows");
        return campaign;
    }

    // Strict read: parses and requires a fully valid campaign.
    inline Campaign read_campaign(const std::filesystem::path &source)
    {
        std::ifstream in(source, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open '" + source.string() + "' for reading");
        std::vector<Violation> structural;
        Campaign campaign = parse_campaign(in, &structural);
        std::vector<Violation> violations = validate_campaign(campaign);
        structural.insert(structural.end(), violations.begin(), violations.end());
        if (!structural.empty())
            throw CampaignValidationError(std::move(structural));
        return campaign;
    }

    // ---------------------------------------------------------------------
    // Synthesizer configuration: flat key=value text, '#' comments. Unknown
    // keys are rejected. Defaults (see CavityConfig) reproduce the reference
    // sweep grid and campaign shape.
    // ---------------------------------------------------------------------
    inline CavityConfig parse_config(std::istream &in)
    {
        CavityConfig config;
        std::string lineText;
        int line_no = 0;
        while (std::getline(in, lineText))
        {
            ++line_no;
            std::string_view lv(lineText);
            while (!lv.empty() && (lv.front() == ' ' || lv.front() == '\t'))
                lv.remove_prefix(1);
            while (!lv.empty() && (lv.back() == ' ' || lv.back() == '\t' || lv.back() == '\r'))
                lv.remove_suffix(1);
            if (lv.empty() || lv.front() == '#')
                continue;
            const std::size_t eq = lv.find('=');
            if (eq == std::string_view::npos)
                throw std::runtime_error("config parse error at line " + std::to_string(line_no) +
                                         ": expected key=value");
            const std::string_view key = lv.substr(0, eq);
            const std::string_view value = lv.substr(eq + 1);

            if (key == "f_start_hz")
                config.grid.f_start_hz = detail::parse_double(value, line_no);
            else if (key == "f_stop_hz")
                config.grid.f_stop_hz = detail::parse_double(value, line_no);
            else if (key == "n_points")
                config.grid.n_points = static_cast<int>(detail::parse_int(value, line_no));
            else if (key == "n_rx")
                config.n_rx = static_cast<int>(detail::parse_int(value, line_no));
            else if (key == "n_tx")
                config.n_tx = static_cast<int>(detail::parse_int(value, line_no));
            else if (key == "n_stirrer")
                config.n_stirrer = static_cast<int>(detail::parse_int(value, line_no));
            else if (key == "cone_levels")
            {
                config.cone_levels.clear();
                for (std::string_view tok : detail::split_csv(value))
                    config.cone_levels.push_back(static_cast<int>(detail::parse_int(tok, line_no)));
            }
            else if (key == "tau0_s")
                config.tau0_s = detail::parse_double(value, line_no);
            else if (key == "beta")
                config.beta = detail::parse_double(value, line_no);
            else if (key == "k_target")
                config.k_target = detail::parse_double(value, line_no);
            else if (key == "n_taps")
                config.n_taps = static_cast<int>(detail::parse_int(value, line_no));
            else if (key == "tap_spacing_s")
                config.tap_spacing_s = detail::parse_double(value, line_no);
            else if (key == "d_link_m")
                config.d_link_m = detail::parse_double(value, line_no);
            else if (key == "d_tx_m")
                config.d_tx_m = detail::parse_double(value, line_no);
            else if (key == "d_rx_m")
                config.d_rx_m = detail::parse_double(value, line_no);
            else if (key == "wavelength_m")
                config.wavelength_m = detail::parse_double(value, line_no);
            else if (key == "seed")
                config.seed = static_cast<std::uint64_t>(detail::parse_int(value, line_no));
            else if (key == "noise_floor_db")
                config.noise_floor_db = detail::parse_double(value, line_no);
            else
                throw std::runtime_error("config parse error at line " + std::to_string(line_no) +
                                         ": unknown key '" + std::string(key) + "'");
        }
        config.require_valid();
        return config;
    }

    inline CavityConfig load_config(const std::filesystem::path &source)
    {
        std::ifstream in(source, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open '" + source.string() + "' for reading");
        return parse_config(in);
    }

} // namespace cavitylink::io

#endif

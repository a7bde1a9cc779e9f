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
// Minimal deterministic SVG line plots: fixed canvas, named font family, no
// timestamps, locale-independent number formatting. Identical inputs produce
// byte-identical files, which keeps golden tests trivial.

#ifndef CAVITYLINK_SVG_HPP
#define CAVITYLINK_SVG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cavitylink::svg
{
    struct Series
    {
        std::string label;
        std::vector<double> x;
        std::vector<double> y;
    };

    struct PlotSpec
    {
        std::string title;
        std::string x_label;
        std::string y_label;
        int width = 800;
        int height = 500;
        std::optional<std::vector<double>> x_ticks; // explicit ticks override the auto scale
    };

    namespace detail
    {
        inline std::string fmt(double v)
        {
            if (!std::isfinite(v))
                return "0";
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }

        // Coordinates rounded to 1/100 px so float noise cannot leak into the file.
        inline std::string coord(double v)
        {
            return fmt(std::round(v * 100.0) / 100.0);
        }

        inline std::string escape(const std::string &s)
        {
            std::string out;
            for (char c : s)
            {
                if (c == '&')
                    out += "&amp;";
                else if (c == '<')
                    out += "&lt;";
                else if (c == '>')
                    out += "&gt;";
                else
                    out += c;
            }
            return out;
        }

        inline std::vector<double> nice_ticks(double lo, double hi, int target = 6)
        {
            const double span = hi - lo;
            const double raw = span / target;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double mult : {1.0, 2.0, 5.0, 10.0})
                if (raw <= mult * mag)
                {
                    step = mult * mag;
                    break;
                }
            std::vector<double> ticks;
            double t = std::ceil(lo / step) * step;
            for (; t <= hi + 0.5 * step; t += step)
            {
                const double v = std::abs(t) < 1e-12 * step ? 0.0 : t;
                ticks.push_back(v);
            }
            return ticks;
        }

        inline const char *palette(std::size_t i)
        {
            static const char *colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                           "#bcbd22", "#17becf"};
            return colors[i % 10];
        }
    } // namespace detail

    inline std::string render_line_plot(const PlotSpec &spec, const std::vector<Series> &series)
    {
        const double ml = 72, mr = 24, mt = 44, mb = 56;
        const double pw = spec.width - ml - mr;
        const double ph = spec.height - mt - mb;

        double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
        double y_lo = x_lo, y_hi = -x_lo;
        for (const Series &s : series)
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                    continue;
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i]);
                y_hi = std::max(y_hi, s.y[i]);
            }
        if (!std::isfinite(x_lo))
        {
            x_lo = 0;
            x_hi = 1;
            y_lo = 0;
            y_hi = 1;
        }
        if (spec.x_ticks && !spec.x_ticks->empty())
        {
            x_lo = std::min(x_lo, spec.x_ticks->front());
            x_hi = std::max(x_hi, spec.x_ticks->back());
        }
        if (x_hi == x_lo)
        {
            x_lo -= 1;
            x_hi += 1;
        }
        if (y_hi == y_lo)
        {
            y_lo -= 1;
            y_hi += 1;
        }
        const double y_pad = 0.05 * (y_hi - y_lo);
        y_lo -= y_pad;
        y_hi += y_pad;

        const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
        const auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
           << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
        os << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
           << "\" fill=\"white\"/>\n";
        os << "<text x=\"" << spec.width / 2 << "\" y=\"24\" font-family=\"sans-serif\" "
           << "font-size=\"16\" text-anchor=\"middle\">" << detail::escape(spec.title)
           << "</text>\n";

        const std::vector<double> x_ticks =
            spec.x_ticks ? *spec.x_ticks : detail::nice_ticks(x_lo, x_hi);
        const std::vector<double> y_ticks = detail::nice_ticks(y_lo, y_hi);

        for (double t : x_ticks)
        {
            if (t < x_lo - 1e-12 || t > x_hi + 1e-12)
                continue;
            const std::string xp = detail::coord(px(t));
            os << "<line x1=\"" << xp << "\" y1=\"" << detail::coord(mt) << "\" x2=\"" << xp
               << "\" y2=\"" << detail::coord(mt + ph) << "\" stroke=\"#dddddd\"/>\n";
            os << "<text x=\"" << xp << "\" y=\"" << detail::coord(mt + ph + 18)
               << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
               << detail::fmt(t) << "</text>\n";
        }
        for (double t : y_ticks)
        {
            const std::string yp = detail::coord(py(t));
            os << "<line x1=\"" << detail::coord(ml) << "\" y1=\"" << yp << "\" x2=\""
               << detail::coord(ml + pw) << "\" y2=\"" << yp << "\" stroke=\"#dddddd\"/>\n";
            os << "<text x=\"" << detail::coord(ml - 6) << "\" y=\"" << detail::coord(py(t) + 4)
               << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
               << detail::fmt(t) << "</text>\n";
        }

        os << "<rect x=\"" << detail::coord(ml) << "\" y=\"" << detail::coord(mt) << "\" width=\""
           << detail::coord(pw) << "\" height=\"" << detail::coord(ph)
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        os << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 12
           << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
           << detail::escape(spec.x_label) << "</text>\n";
        os << "<text x=\"18\" y=\"" << spec.height / 2
           << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
           << "transform=\"rotate(-90 18 " << spec.height / 2 << ")\">"
           << detail::escape(spec.y_label) << "</text>\n";

        for (std::size_t s = 0; s < series.size(); ++s)
        {
            // split at non-finite samples so gaps stay gaps
            std::vector<std::string> segments;
            std::string current;
            std::size_t pts = 0;
            const std::size_t n = std::min(series[s].x.size(), series[s].y.size());
            for (std::size_t i = 0; i < n; ++i)
            {
                if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i]))
                {
                    if (pts >= 2)
                        segments.push_back(current);
                    current.clear();
                    pts = 0;
                    continue;
                }
                if (!current.empty())
                    current += ' ';
                current += detail::coord(px(series[s].x[i])) + "," +
                           detail::coord(py(series[s].y[i]));
                ++pts;
            }
            if (pts >= 2)
                segments.push_back(current);
            for (const std::string &seg : segments)
                os << "<polyline fill=\"none\" stroke=\"" << detail::palette(s)
                   << "\" stroke-width=\"1.5\" points=\"" << seg << "\"/>\n";
        }

        for (std::size_t s = 0; s < series.size(); ++s)
        {
            const double lx = ml + pw - 150;
            const double ly = mt + 16 + 18 * static_cast<double>(s);
            os << "<line x1=\"" << detail::coord(lx) << "\" y1=\"" << detail::coord(ly - 4)
               << "\" x2=\"" << detail::coord(lx + 24) << "\" y2=\"" << detail::coord(ly - 4)
               << "\" stroke=\"" << detail::palette(s) << "\" stroke-width=\"1.5\"/>\n";
            os << "<text x=\"" << detail::coord(lx + 30) << "\" y=\"" << detail::coord(ly)
               << "\" font-family=\"sans-serif\" font-size=\"12\">"
               << detail::escape(series[s].label) << "</text>\n";
        }

        os << "</svg>\n";
        return os.str();
    }

} // namespace cavitylink::svg

#endif

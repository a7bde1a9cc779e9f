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

#ifndef CAVITYLINK_STATS_HPP
#define CAVITYLINK_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cavitylink::stats
{
    // Population conventions throughout (divide by n), so closed-form oracles
    // in the tests match exactly.

    inline double mean(std::span<const double> x)
    {
        if (x.empty())
            throw std::invalid_argument("mean: empty input");
        double s = 0.0;
        for (double v : x)
            s += v;
        return s / static_cast<double>(x.size());
    }

    inline double population_variance(std::span<const double> x)
    {
        const double m = mean(x);
        double s = 0.0;
        for (double v : x)
            s += (v - m) * (v - m);
        return s / static_cast<double>(x.size());
    }

    inline double population_stddev(std::span<const double> x)
    {
        return std::sqrt(population_variance(x));
    }

    // Linearly interpolated quantile of an ascending-sorted sample at position
    // (n-1)*p (the convention most numeric packages default to).
    inline double quantile_sorted(std::span<const double> sorted, double p)
    {
        if (sorted.empty())
            throw std::invalid_argument("quantile_sorted: empty input");
        if (!(p >= 0.0) || !(p <= 1.0))
            throw std::invalid_argument("quantile_sorted: p must be in [0,1]");
        const double h = static_cast<double>(sorted.size() - 1) * p;
        const std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 >= sorted.size())
            return sorted.back();
        const double w = h - static_cast<double>(lo);
        return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
    }

    inline double quantile(std::vector<double> x, double p)
    {
        std::sort(x.begin(), x.end());
        return quantile_sorted(x, p);
    }

    inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

    // Ordinary least squares y = a + b x; returns {intercept, slope}.
    inline std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw std::invalid_argument("linear_fit: need >= 2 paired samples");
        const double mx = mean(x);
        const double my = mean(y);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        if (!(sxx > 0.0))
            throw std::invalid_argument("linear_fit: regressor has zero spread");
        const double b = sxy / sxx;
        return {my - b * mx, b};
    }

} // namespace cavitylink::stats

#endif

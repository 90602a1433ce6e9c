#include "fjb/quantile.hpp"

#include "fjb/error.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fjb
{
    QuantileEstimate estimate_quantile(std::span<const double> samples, double p, double gamma)
    {
        if (!(p > 0.0 && p < 1.0))
            throw InvalidSpec("quantile level must lie in (0, 1)");
        if (!(gamma > 0.0 && gamma < 1.0))
            throw InvalidSpec("confidence must lie in (0, 1)");
        const auto required = static_cast<std::size_t>(std::ceil(10.0 / (1.0 - p) - 1e-9));
        const std::size_t n = samples.size();
        if (n < required)
            throw InsufficientSamples("need " + std::to_string(required) + " samples for p = " + std::to_string(p) +
                                          ", have " + std::to_string(n),
                                      required);

        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());

        const double np = static_cast<double>(n) * p;
        const double var = np * (1.0 - p);
        auto clamp_index = [n](double i) {
            return static_cast<std::size_t>(std::clamp(i, 1.0, static_cast<double>(n)));
        };
        const std::size_t point = clamp_index(std::ceil(np - 1e-9));

        double j;
        double l;
        if (var > 25.0)
        {
            const double z = boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + gamma));
            const double half = z * std::sqrt(var);
            j = std::ceil(np - half);
            l = std::ceil(np + half);
        }
        else
        {
            const boost::math::binomial binom(static_cast<double>(n), p);
            j = boost::math::quantile(binom, 0.5 * (1.0 - gamma));
            l = boost::math::quantile(binom, 0.5 * (1.0 + gamma)) + 1.0;
        }
        const std::size_t lo = std::min(clamp_index(j), point);
        const std::size_t hi = std::max(clamp_index(l), point);
        return {p, sorted[point - 1], sorted[lo - 1], sorted[hi - 1], gamma, n};
    }

    QuantileEstimate estimate_quantile(const SampleSet& samples, double p, double gamma)
    {
        return estimate_quantile(std::span<const double>(samples.values), p, gamma);
    }
}

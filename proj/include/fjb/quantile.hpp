#pragma once

#include "fjb/simulate.hpp"

#include <cstddef>
#include <span>

namespace fjb
{
    struct QuantileEstimate
    {
        double p;
        double value;
        double ci_lo;
        double ci_hi;
        double gamma;
        std::size_t n_samples;
    };

    /// Order-statistic estimate of the p-quantile with a distribution-free
    /// confidence interval of level gamma.
    ///
    /// The point estimate is X_(ceil(n p)). The interval is [X_(j), X_(l)] with
    /// j, l = ceil(n p -/+ z sqrt(n p (1-p))) when n p (1-p) > 25, and binomial
    /// quantiles otherwise. Throws InsufficientSamples below 10 / (1 - p) samples.
    QuantileEstimate estimate_quantile(std::span<const double> samples, double p, double gamma = 0.682);

    QuantileEstimate estimate_quantile(const SampleSet& samples, double p, double gamma = 0.682);
}

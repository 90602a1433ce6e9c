#include "fjb/tail_bound.hpp"

#include "fjb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fjb
{
    TailBound::TailBound(std::vector<TailTerm> terms, double theta_used, BoundMeta meta)
        : terms_(std::move(terms)), theta_(theta_used), meta_(meta)
    {
        if (terms_.empty())
            throw InvalidSpec("tail bound needs at least one term");
        for (const auto& t : terms_)
        {
            if (!(t.decay > 0.0) || !std::isfinite(t.coeff) || t.power < 0)
                throw InvalidSpec("tail bound term needs finite coefficient and positive decay");
        }
    }

    double TailBound::evaluate(double tau) const
    {
        double sum = 0.0;
        for (const auto& t : terms_)
        {
            double v = t.coeff * std::exp(-t.decay * tau);
            if (t.power > 0)
                v *= std::pow(tau, t.power);
            sum += v;
        }
        return sum;
    }

    bool TailBound::single_exponential() const noexcept
    {
        return terms_.size() == 1 && terms_.front().power == 0 && terms_.front().coeff > 0.0;
    }

    double invert_quantile(const TailBound& bound, double epsilon)
    {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw InvalidSpec("epsilon must lie in (0, 1)");
        if (bound.single_exponential())
        {
            const auto& t = bound.terms().front();
            return std::max(0.0, std::log(t.coeff / epsilon) / t.decay);
        }

        double slowest = std::numeric_limits<double>::infinity();
        for (const auto& t : bound.terms())
            slowest = std::min(slowest, t.decay);

        // Past `hi` the bound is below epsilon and no longer increasing.
        double hi = 1.0 / slowest;
        for (int i = 0; i < 2000; ++i)
        {
            const double f = bound.evaluate(hi);
            if (f <= epsilon && bound.evaluate(hi * 1.01) <= f)
                break;
            hi *= 2.0;
        }

        constexpr int kGrid = 1024;
        int last_above = -1;
        for (int i = kGrid; i >= 0; --i)
        {
            if (bound.evaluate(hi * i / kGrid) > epsilon)
            {
                last_above = i;
                break;
            }
        }
        if (last_above < 0)
            return 0.0;
        if (last_above == kGrid)
            throw Error("invert_quantile: failed to bracket the crossing");

        double a = hi * last_above / kGrid;
        double b = hi * (last_above + 1) / kGrid;
        for (int i = 0; i < 200 && (b - a) > 1e-13 * b; ++i)
        {
            const double mid = 0.5 * (a + b);
            if (bound.evaluate(mid) > epsilon)
                a = mid;
            else
                b = mid;
        }
        return b;
    }
}

#pragma once

#include "fjb/envelope.hpp"
#include "fjb/tail_bound.hpp"

#include <functional>

namespace fjb
{
    /// Builds the bound for a given theta; throws InfeasibleTheta or DomainError where none exists.
    using BoundFactory = std::function<TailBound(double theta)>;

    struct ThetaOptimum
    {
        double theta;
        double tau;
        TailBound bound;
    };

    /// Search interval for a (arrival, service) pair: the intersection of their
    /// domains, with an unbounded upper end replaced by 50 / mean service time.
    ThetaInterval search_interval(const Envelope& arrival, const Envelope& service);

    /// Minimizes invert_quantile(factory(theta), epsilon) over `search`.
    ///
    /// A 128-point grid over [lo + d, hi - d], d = 1e-9 (hi - lo), is followed by
    /// golden-section refinement around the best grid point down to a relative
    /// width of 1e-8. When the optimum sits against the feasibility boundary the
    /// boundary itself is located by bisection. Grid ties (within 1e-12) resolve
    /// to the smallest theta. The returned bound records search.hi as its search cap.
    ThetaOptimum optimize_theta(const BoundFactory& factory, ThetaInterval search, double epsilon);
}

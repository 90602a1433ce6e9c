#pragma once

#include "fjb/bounds.hpp"
#include "fjb/config.hpp"
#include "fjb/simulate.hpp"
#include "fjb/tail_bound.hpp"
#include "fjb/topology.hpp"

#include <optional>
#include <string>

namespace fjb
{
    /// Result of bounding one topology at one epsilon.
    struct BoundOutcome
    {
        bool available = false;
        double theta = 0.0;
        double tau = 0.0;
        double alpha = 0.0;
        double beta = 0.0;
        std::optional<double> expected;
        Increments mode = Increments::Independent;
        /// False when the simulated system lies outside the bound's assumptions.
        bool applies_to_simulation = true;
        std::string reason;
        std::optional<TailBound> bound;
    };

    /// Offered load per server; the system is stable below 1.
    double utilization(const Topology& topology);

    /// Constant for which the dispatched bound family is built at a given theta.
    Increments resolve_increments(const Topology& topology, IncrementsChoice choice);

    /// Bound of `metric` for `topology` at theta (throws InfeasibleTheta or
    /// DomainError where none exists).
    TailBound bound_at(const Topology& topology, Metric metric, double theta, Increments mode);

    /// Theta interval searched for `topology`.
    ThetaInterval theta_search_interval(const Topology& topology);

    /// Bounds the (1 - epsilon) quantile, optimizing theta or using a fixed one.
    /// Never throws for unstable or unsupported systems; `reason` is set instead.
    BoundOutcome compute_bound(const Topology& topology, Metric metric, double epsilon, const ThetaPolicy& policy,
                               IncrementsChoice increments);
}

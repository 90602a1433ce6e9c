#pragma once

#include "fjb/distribution.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace fjb
{
    /// Open interval (lo, hi) of admissible theta values.
    struct ThetaInterval
    {
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();

        bool contains(double theta) const noexcept { return theta > lo && theta < hi; }
        bool empty() const noexcept { return !(lo < hi); }
        ThetaInterval intersect(const ThetaInterval& other) const noexcept
        {
            return {std::max(lo, other.lo), std::min(hi, other.hi)};
        }
    };

    enum class EnvelopeDirection
    {
        ArrivalLower,  ///< rho(theta) stands for rho_A(-theta); nonincreasing in theta
        ServiceUpper,  ///< rho(theta) nondecreasing in theta
    };

    /// (sigma, rho) characterization of a cumulative arrival or service process.
    ///
    /// An envelope is an immutable closure over its source distribution and the
    /// chain of transformations applied to it, so compositions nest freely.
    /// `iid_increments` marks envelopes whose increments are iid with sigma = 0,
    /// which is what qualifies a bound for the renewal (alpha = 1) constants.
    class Envelope
    {
    public:
        using Fn = std::function<double(double)>;

        Envelope(EnvelopeDirection direction, Fn sigma, Fn rho, ThetaInterval domain, double mean,
                 bool iid_increments, std::string label);

        double sigma(double theta) const;
        double rho(double theta) const;

        EnvelopeDirection direction() const noexcept { return direction_; }
        const ThetaInterval& domain() const noexcept { return domain_; }
        /// Limit of rho as theta -> 0+: the mean increment.
        double mean() const noexcept { return mean_; }
        bool iid_increments() const noexcept { return iid_; }
        const std::string& label() const noexcept { return label_; }

    private:
        void check(double theta) const;

        EnvelopeDirection direction_;
        Fn sigma_;
        Fn rho_;
        ThetaInterval domain_;
        double mean_;
        bool iid_;
        std::string label_;
    };

    struct RoundRobin
    {
    };

    struct RandomThinning
    {
        double p;
    };

    using ThinningPolicy = std::variant<RoundRobin, RandomThinning>;

    /// Renewal arrivals: sigma = 0, rho(theta) = -(1/theta) ln E[e^{-theta A(1,2)}].
    Envelope gi_arrival_envelope(const Distribution& interarrival);

    /// Renewal service: sigma = 0, rho(theta) = (1/theta) ln E[e^{theta S(1)}].
    Envelope gi_service_envelope(const Distribution& service);

    /// Arrival envelope seen by one of k servers after round-robin or random thinning.
    Envelope thinned_arrival_envelope(const Envelope& base, int k, const ThinningPolicy& policy);

    /// Split-merge service: rho is the per-job rate of max_i Q_i over k iid tasks.
    Envelope splitmerge_service_envelope(const Distribution& task, int k, MgfMethod method = MgfMethod::Auto);

    /// Union-bound estimate (1/theta) ln(k E[e^{theta Q}]) that dominates the split-merge rho.
    double splitmerge_rho_upper(const Distribution& task, int k, double theta);

    /// Replication with purging: rho of min_i L_i over k iid replicas.
    Envelope replication_service_envelope(const Distribution& replica, int k, MgfMethod method = MgfMethod::Auto);

    /// Fork-join service over k servers: sigma gains ln(k)/theta, rho unchanged.
    Envelope forkjoin_service_envelope(const Envelope& task, int k);

    /// A job made of `tasks` consecutive increments of `task`: rho scales by `tasks`, sigma unchanged.
    Envelope aggregate_service_envelope(const Envelope& task, int tasks);
}

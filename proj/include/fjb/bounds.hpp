#pragma once

#include "fjb/envelope.hpp"
#include "fjb/tail_bound.hpp"

#include <vector>

namespace fjb
{
    /// Which constants a bound may use.
    enum class Increments
    {
        Independent,  ///< GI|GI: renewal processes, alpha = 1, slack >= 0 admissible
        General,      ///< G|G: stationary processes, alpha > 1, slack must be > 0
    };

    struct BoundPair
    {
        TailBound sojourn;
        TailBound waiting;
    };

    /// Single max-plus server (work-conserving FIFO queue, or any exact server
    /// described by a service envelope).
    BoundPair gg1_bounds(const Envelope& arrival, const Envelope& service, double theta, Increments mode);

    /// Multi-queue fork-join with k homogeneous servers; waiting refers to the
    /// task that starts service last.
    BoundPair forkjoin_bounds(const Envelope& arrival, const Envelope& task, int k, double theta, Increments mode);

    /// rho_Q + (ln k + ln alpha + 1) / theta, obtained by integrating the sojourn tail.
    double expected_sojourn_bound(const Envelope& arrival, const Envelope& task, int k, double theta,
                                  Increments mode);

    /// End-to-end sojourn of h independent homogeneous fork-join stages in tandem.
    TailBound multistage_bounds(const Envelope& arrival, const Envelope& task, int k, int h, double theta);

    /// Arrivals thinned over `branches` sub-systems, each a fork-join of
    /// `fork_width` servers serving `job` per server; optional resequencing of
    /// the merged output. Waiting is per server.
    BoundPair thinned_forkjoin_bounds(const Envelope& arrival, const Envelope& job, int branches, int fork_width,
                                      const ThinningPolicy& policy, double theta, bool resequencing,
                                      Increments mode);

    /// k servers fed by thinning; each serves whole jobs.
    BoundPair thinned_multiserver_bounds(const Envelope& arrival, const Envelope& job, int k,
                                         const ThinningPolicy& policy, double theta, bool resequencing,
                                         Increments mode);

    /// Round-robin thinning into a = branches fork-join sub-systems of k/a servers,
    /// each server handling a tasks of every job it receives.
    TailBound hybrid_bounds(const Envelope& arrival, const Envelope& task, int k, int a, double theta,
                            Increments mode = Increments::Independent);

    /// (1/theta) ln(k mu / (k mu - theta)): rate of the inter-idle times of k exponential servers.
    double rho_idle(double mu, int k, double theta);

    /// (e^{theta k rho_Z} - 1) / (e^{theta rho_Z} - 1).
    double sq_forkjoin_beta(double mu, int k, double theta);

    /// Single-queue k-server system with exponential(mu) jobs.
    BoundPair sq_multiserver_bounds(const Envelope& arrival, double mu, int k, double theta, Increments mode);

    struct SqForkJoinBounds
    {
        TailBound sojourn;
        /// Entry i-1 bounds the waiting time of task i; the last one is the job's waiting time.
        std::vector<TailBound> waiting_per_task;
    };

    /// Single-queue fork-join with k servers and exponential(mu) tasks.
    SqForkJoinBounds sq_forkjoin_bounds(const Envelope& arrival, double mu, int k, double theta, Increments mode);
}

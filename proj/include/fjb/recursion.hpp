#pragma once

#include "fjb/topology.hpp"
#include "fjb/trace.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fjb
{
    struct JobOutcome
    {
        double departure;
        double waiting;
    };

    /// Per-job max-plus recursion of one topology.
    ///
    /// `services` holds one job's draws as produced by JobSource. When `starts`
    /// is non-null it receives the service start times: one entry for systems
    /// with a single start, one per task for fork-join kinds, one per server of
    /// the chosen branch for thinned systems and stage-major h x k entries for
    /// multistage networks.
    class Recursion
    {
    public:
        virtual ~Recursion() = default;
        virtual JobOutcome step(double arrival, std::span<const double> services, int branch,
                                std::vector<double>* starts) = 0;
    };

    std::unique_ptr<Recursion> make_recursion(const Topology& topology);

    struct JobRecord
    {
        std::size_t n;
        double arrival;
        std::vector<double> services;
        std::vector<double> starts;
        double departure;
        double waiting;
        double sojourn;
    };

    /// Departures for explicit inputs. `services` is job-major with
    /// drawn_stages() x draws_per_stage() entries per job; `branches` may be
    /// empty for round-robin or unthinned systems. Throws InvalidInput on
    /// dimension mismatch or decreasing arrivals.
    std::vector<double> maxplus_departures(const Topology& topology, std::span<const double> arrivals,
                                           std::span<const double> services, std::span<const int> branches = {});

    /// Full per-job records of a drawn trace.
    std::vector<JobRecord> maxplus_trace(const Topology& topology, const DrawnTrace& trace);
}

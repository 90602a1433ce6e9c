#pragma once

#include "fjb/rng.hpp"
#include "fjb/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fjb
{
    /// Draws of one job: arrival time, service draws (stage-major) and branch.
    struct JobInput
    {
        double arrival = 0.0;
        std::vector<double> services;
        int branch = 0;
    };

    /// Generates job inputs in order from the counter-based RNG.
    ///
    /// Job n (1-based) reads inter-arrival draw (Arrival, n, 0, 0) and random
    /// assignment (Assignment, n, 0, 0). Task i of stage s reads
    /// (Service, n, i / 2, s) draw i % 2 when one uniform makes a draw, and
    /// (Service, n, i, s) draws 0.. otherwise. Topologies with the same task
    /// distribution therefore see identical task i values, which couples their
    /// sample paths.
    class JobSource
    {
    public:
        JobSource(const Topology& topology, std::uint64_t seed);

        /// Fills `job` with the next job's draws.
        void next(JobInput& job);

        std::uint64_t jobs_drawn() const noexcept { return n_; }

    private:
        double draw(const Distribution& dist, RngStream stream, std::uint64_t job, std::uint32_t task,
                    std::uint32_t stage);

        Topology topology_;
        CounterRng rng_;
        std::vector<double> cumulative_;
        std::vector<double> uniforms_;
        std::uint64_t n_ = 0;
        double clock_ = 0.0;
    };

    /// Fully materialized inputs of a run.
    struct DrawnTrace
    {
        std::vector<double> arrivals;
        std::vector<double> services; // job-major, then stage, then task
        std::vector<int> branches;
        int stages = 1;
        int width = 1;

        std::size_t size() const noexcept { return arrivals.size(); }
        std::span<const double> job_services(std::size_t index) const;
    };

    DrawnTrace draw_trace(const Topology& topology, std::size_t n_jobs, std::uint64_t seed);
}

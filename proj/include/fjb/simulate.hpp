#pragma once

#include "fjb/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fjb
{
    enum class Metric
    {
        Sojourn,
        Waiting,
    };

    /// Metric values of every sample_interval-th job, in job order.
    struct SampleSet
    {
        Metric metric = Metric::Sojourn;
        std::vector<double> values;
        std::size_t sample_interval = 1;
        std::uint64_t seed = 0;
        std::size_t n_jobs = 0;
    };

    struct SimulationResult
    {
        SampleSet sojourn;
        SampleSet waiting;
    };

    /// Streams n_jobs jobs through the topology's recursion and keeps jobs
    /// sample_interval, 2 sample_interval, ... . No warm-up is discarded.
    SimulationResult simulate(const Topology& topology, std::size_t n_jobs, std::size_t sample_interval,
                              std::uint64_t seed);
}

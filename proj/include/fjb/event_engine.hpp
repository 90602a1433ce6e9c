#pragma once

#include "fjb/topology.hpp"
#include "fjb/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fjb
{
    /// Per-job result of the event-driven engine.
    struct EventRecord
    {
        double departure;
        double last_start; ///< latest first-stage task start
    };

    /// Simulates `trace` with an explicit future-event list: servers, queues,
    /// join buffers, purging and a resequencing buffer. Shares no code with the
    /// max-plus recursions.
    std::vector<EventRecord> run_event_engine(const Topology& topology, const DrawnTrace& trace);

    /// Max |D_event(n) - D_recursion(n)| over one drawn trace.
    double crosscheck_engine(const Topology& topology, std::size_t n_jobs, std::uint64_t seed);
}

#pragma once

#include "fjb/recursion.hpp"
#include "fjb/topology.hpp"

#include <cstddef>
#include <ostream>
#include <vector>

namespace fjb
{
    /// Number of positive-length intervals during which a job or task waits in
    /// the shared queue while fewer than k servers are busy. Single-queue
    /// systems only; throws InvalidSpec otherwise.
    std::size_t work_conservation_violations(const Topology& topology, const std::vector<JobRecord>& records);

    /// Number of jobs n with D(n) < D(n-1).
    std::size_t overtaking_events(const std::vector<JobRecord>& records);

    /// Writes n, A, V (or V_1..V_m), D, W, T with a header row.
    void write_trace_csv(std::ostream& out, const std::vector<JobRecord>& records);
}

#pragma once

#include "fjb/distribution.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fjb
{
    enum class SystemKind
    {
        SingleServer,
        ForkJoin,
        SplitMerge,
        Replication,
        Thinned,
        SingleQueueMultiServer,
        SingleQueueForkJoin,
        MultiStage,
    };

    enum class Assignment
    {
        RoundRobin,
        Random,
    };

    enum class StageService
    {
        Independent,
        Identical,
    };

    std::string_view to_string(SystemKind kind);
    SystemKind parse_system_kind(std::string_view name);

    /// A queueing system under study.
    ///
    /// `k` is the number of servers. For Thinned systems the servers are grouped
    /// into k / fork_width branches; each arriving job goes to one branch and is
    /// forked over its fork_width servers. `job_tasks` task draws are summed into
    /// the work a job brings to one server (single server, thinned, single-queue
    /// multi-server); it models a job of several sequential tasks.
    struct Topology
    {
        SystemKind kind = SystemKind::SingleServer;
        int k = 1;
        int h = 1;
        Assignment assignment = Assignment::RoundRobin;
        std::vector<double> probabilities; // Random assignment; empty means uniform
        bool resequencing = false;
        StageService stage_service = StageService::Independent;
        int fork_width = 1;
        int job_tasks = 1;
        Distribution arrival = Distribution::exponential(1.0);
        Distribution task_service = Distribution::exponential(1.0);

        /// Throws InvalidSpec on any inconsistency.
        void validate() const;

        int branches() const;
        /// Service draws consumed per job and stage.
        int draws_per_stage() const;
        /// Stages with their own service draws (1 when stages reuse draws).
        int drawn_stages() const;
        /// Probability per branch, expanded to uniform when unset.
        std::vector<double> branch_probabilities() const;
        /// True when departures leave in arrival order on every sample path.
        bool order_preserving() const;
    };
}

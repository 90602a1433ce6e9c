#include "fjb/topology.hpp"

#include "fjb/error.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <utility>

namespace fjb
{
    namespace
    {
        constexpr std::array<std::pair<SystemKind, std::string_view>, 8> kNames{{
            {SystemKind::SingleServer, "single-server"},
            {SystemKind::ForkJoin, "fork-join"},
            {SystemKind::SplitMerge, "split-merge"},
            {SystemKind::Replication, "replication"},
            {SystemKind::Thinned, "thinned"},
            {SystemKind::SingleQueueMultiServer, "sq-multiserver"},
            {SystemKind::SingleQueueForkJoin, "sq-fork-join"},
            {SystemKind::MultiStage, "multistage"},
        }};
    }

    std::string_view to_string(SystemKind kind)
    {
        for (const auto& [k, name] : kNames)
            if (k == kind)
                return name;
        return "unknown";
    }

    SystemKind parse_system_kind(std::string_view name)
    {
        for (const auto& [k, n] : kNames)
            if (n == name)
                return k;
        throw InvalidSpec("unknown system kind '" + std::string(name) + "'");
    }

    void Topology::validate() const
    {
        if (k < 1)
            throw InvalidSpec("k must be >= 1");
        if (h < 1)
            throw InvalidSpec("h must be >= 1");
        if (job_tasks < 1)
            throw InvalidSpec("job_tasks must be >= 1");
        if (h != 1 && kind != SystemKind::MultiStage)
            throw InvalidSpec("h applies to multistage systems only");
        if (fork_width < 1 || k % fork_width != 0)
            throw InvalidSpec("fork_width must divide k");
        if (fork_width != 1 && kind != SystemKind::Thinned)
            throw InvalidSpec("fork_width applies to thinned systems only");
        if (resequencing && kind != SystemKind::Thinned)
            throw InvalidSpec("resequencing applies to thinned systems only");
        if (job_tasks != 1 && kind != SystemKind::SingleServer && kind != SystemKind::Thinned &&
            kind != SystemKind::SingleQueueMultiServer)
            throw InvalidSpec("job_tasks applies to single-server, thinned and sq-multiserver systems");
        if (kind == SystemKind::SingleServer && k != 1)
            throw InvalidSpec("single-server requires k = 1");

        if (!probabilities.empty())
        {
            if (kind != SystemKind::Thinned || assignment != Assignment::Random)
                throw InvalidSpec("probabilities apply to random thinning only");
            if (static_cast<int>(probabilities.size()) != branches())
                throw InvalidSpec("probability vector needs one entry per branch");
            for (double p : probabilities)
                if (!(p > 0.0))
                    throw InvalidSpec("assignment probabilities must be positive");
            const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
            if (std::abs(total - 1.0) > 1e-9)
                throw InvalidSpec("assignment probabilities must sum to 1");
        }
    }

    int Topology::branches() const { return kind == SystemKind::Thinned ? k / fork_width : 1; }

    int Topology::draws_per_stage() const
    {
        switch (kind)
        {
        case SystemKind::SingleServer:
        case SystemKind::SingleQueueMultiServer:
            return job_tasks;
        case SystemKind::Thinned:
            return fork_width * job_tasks;
        default:
            return k;
        }
    }

    int Topology::drawn_stages() const
    {
        return (kind == SystemKind::MultiStage && stage_service == StageService::Independent) ? h : 1;
    }

    std::vector<double> Topology::branch_probabilities() const
    {
        if (!probabilities.empty())
            return probabilities;
        return std::vector<double>(static_cast<std::size_t>(branches()), 1.0 / branches());
    }

    bool Topology::order_preserving() const
    {
        switch (kind)
        {
        case SystemKind::SingleQueueMultiServer:
            return k == 1;
        case SystemKind::SingleQueueForkJoin:
            return k == 1;
        case SystemKind::Thinned:
            return resequencing || branches() == 1;
        default:
            return true;
        }
    }
}

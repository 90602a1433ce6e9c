#include "fjb/simulate.hpp"

#include "fjb/error.hpp"
#include "fjb/recursion.hpp"
#include "fjb/trace.hpp"

namespace fjb
{
    SimulationResult simulate(const Topology& topology, std::size_t n_jobs, std::size_t sample_interval,
                              std::uint64_t seed)
    {
        if (n_jobs < 1)
            throw InvalidSpec("n_jobs must be >= 1");
        if (sample_interval < 1)
            throw InvalidSpec("sample_interval must be >= 1");

        auto recursion = make_recursion(topology);
        JobSource source(topology, seed);

        SimulationResult result;
        result.sojourn = {Metric::Sojourn, {}, sample_interval, seed, n_jobs};
        result.waiting = {Metric::Waiting, {}, sample_interval, seed, n_jobs};
        const std::size_t count = n_jobs / sample_interval;
        result.sojourn.values.reserve(count);
        result.waiting.values.reserve(count);

        JobInput job;
        for (std::size_t n = 1; n <= n_jobs; ++n)
        {
            source.next(job);
            const auto out = recursion->step(job.arrival, job.services, job.branch, nullptr);
            if (n % sample_interval == 0)
            {
                result.sojourn.values.push_back(out.departure - job.arrival);
                result.waiting.values.push_back(out.waiting);
            }
        }
        return result;
    }
}

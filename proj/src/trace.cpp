#include "fjb/trace.hpp"

#include <algorithm>
#include <numeric>

namespace fjb
{
    JobSource::JobSource(const Topology& topology, std::uint64_t seed) : topology_(topology), rng_(seed)
    {
        topology_.validate();
        if (topology_.kind == SystemKind::Thinned && topology_.assignment == Assignment::Random)
        {
            const auto p = topology_.branch_probabilities();
            cumulative_.resize(p.size());
            std::partial_sum(p.begin(), p.end(), cumulative_.begin());
            cumulative_.back() = 1.0;
        }
    }

    double JobSource::draw(const Distribution& dist, RngStream stream, std::uint64_t job, std::uint32_t task,
                           std::uint32_t stage)
    {
        uniforms_.resize(static_cast<std::size_t>(dist.uniforms_per_draw()));
        rng_.uniforms(stream, job, task, stage, uniforms_);
        return dist.sample(uniforms_);
    }

    void JobSource::next(JobInput& job)
    {
        ++n_;
        clock_ += draw(topology_.arrival, RngStream::Arrival, n_, 0, 0);
        job.arrival = clock_;

        const int width = topology_.draws_per_stage();
        const int stages = topology_.drawn_stages();
        job.services.resize(static_cast<std::size_t>(width) * stages);
        const auto& task = topology_.task_service;
        const int per_draw = task.uniforms_per_draw();
        for (int s = 0; s < stages; ++s)
        {
            double* out = job.services.data() + static_cast<std::size_t>(s) * width;
            if (per_draw == 1)
            {
                // One Philox block serves tasks 2j and 2j + 1.
                double u[2];
                for (int i = 0; i < width; i += 2)
                {
                    rng_.uniforms(RngStream::Service, n_, static_cast<std::uint32_t>(i / 2),
                                  static_cast<std::uint32_t>(s), u);
                    out[i] = task.sample(std::span<const double>(u, 1));
                    if (i + 1 < width)
                        out[i + 1] = task.sample(std::span<const double>(u + 1, 1));
                }
            }
            else
                for (int i = 0; i < width; ++i)
                    out[i] = draw(task, RngStream::Service, n_, static_cast<std::uint32_t>(i),
                                  static_cast<std::uint32_t>(s));
        }

        if (topology_.kind != SystemKind::Thinned)
            job.branch = 0;
        else if (topology_.assignment == Assignment::RoundRobin)
            job.branch = static_cast<int>((n_ - 1) % static_cast<std::uint64_t>(topology_.branches()));
        else
        {
            const double u = rng_.uniform(RngStream::Assignment, n_, 0, 0);
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            job.branch = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                                   static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
        }
    }

    std::span<const double> DrawnTrace::job_services(std::size_t index) const
    {
        const std::size_t per_job = static_cast<std::size_t>(stages) * width;
        return std::span<const double>(services).subspan(index * per_job, per_job);
    }

    DrawnTrace draw_trace(const Topology& topology, std::size_t n_jobs, std::uint64_t seed)
    {
        JobSource source(topology, seed);
        DrawnTrace trace;
        trace.stages = topology.drawn_stages();
        trace.width = topology.draws_per_stage();
        trace.arrivals.reserve(n_jobs);
        trace.branches.reserve(n_jobs);
        trace.services.reserve(n_jobs * static_cast<std::size_t>(trace.stages) * trace.width);
        JobInput job;
        for (std::size_t n = 0; n < n_jobs; ++n)
        {
            source.next(job);
            trace.arrivals.push_back(job.arrival);
            trace.services.insert(trace.services.end(), job.services.begin(), job.services.end());
            trace.branches.push_back(job.branch);
        }
        return trace;
    }
}

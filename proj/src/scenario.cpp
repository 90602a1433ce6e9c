#include "fjb/scenario.hpp"

#include "fjb/dispatch.hpp"
#include "fjb/error.hpp"
#include "fjb/quantile.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace fjb
{
    namespace
    {
        void run_parallel(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body)
        {
            workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto worker = [&] {
                for (std::size_t i = next++; i < count; i = next++)
                {
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            };
            if (workers == 1)
                worker();
            else
            {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < workers; ++w)
                    pool.emplace_back(worker);
                for (auto& t : pool)
                    t.join();
            }
            if (failure)
                std::rethrow_exception(failure);
        }

        void add_reason(std::string& reason, const std::string& code)
        {
            if (code.empty())
                return;
            reason += reason.empty() ? code : ";" + code;
        }
    }

    std::vector<ResultRow> run_scenario(const Scenario& s, const RunOptions& options)
    {
        s.validate();
        const auto specs = s.cells();
        std::vector<Topology> cells;
        cells.reserve(specs.size());
        for (const auto& spec : specs)
            cells.push_back(spec.instantiate());

        const bool want_bound = s.mode != Mode::SimOnly;
        const bool want_sim = s.mode != Mode::BoundOnly;
        const std::size_t n_eps = s.epsilons.size();
        const std::size_t n_seeds = s.seeds.size();

        std::vector<BoundOutcome> bounds(cells.size() * n_eps);
        std::vector<std::optional<SampleSet>> samples(cells.size() * n_seeds);
        std::vector<bool> stable(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            stable[c] = utilization(cells[c]) < 1.0;

        const std::size_t bound_jobs = want_bound ? bounds.size() : 0;
        const std::size_t sim_jobs = want_sim ? samples.size() : 0;
        run_parallel(bound_jobs + sim_jobs, options.workers, [&](std::size_t job) {
            if (job < bound_jobs)
            {
                const std::size_t c = job / n_eps;
                bounds[job] = compute_bound(cells[c], s.metric, s.epsilons[job % n_eps], s.theta_policy, s.increments);
                return;
            }
            const std::size_t idx = job - bound_jobs;
            const std::size_t c = idx / n_seeds;
            if (!stable[c])
                return;
            auto result = simulate(cells[c], s.n_jobs, s.sample_interval, s.seeds[idx % n_seeds]);
            samples[idx] = std::move(s.metric == Metric::Sojourn ? result.sojourn : result.waiting);
        });

        std::vector<ResultRow> rows;
        for (std::size_t c = 0; c < cells.size(); ++c)
        {
            const auto& t = cells[c];
            for (std::size_t e = 0; e < n_eps; ++e)
            {
                const std::size_t row_seeds = want_sim ? n_seeds : 1;
                for (std::size_t r = 0; r < row_seeds; ++r)
                {
                    ResultRow row;
                    row.scenario_id = s.id;
                    row.system = std::string(to_string(t.kind));
                    row.metric = s.metric == Metric::Sojourn ? "sojourn" : "waiting";
                    row.k = t.k;
                    row.h = t.h;
                    row.lambda = 1.0 / t.arrival.mean();
                    row.mu = 1.0 / t.task_service.mean();
                    row.epsilon = s.epsilons[e];

                    const BoundOutcome* b = want_bound ? &bounds[c * n_eps + e] : nullptr;
                    if (b)
                    {
                        row.alpha_mode = b->mode == Increments::Independent ? "GI" : "GG";
                        if (b->available)
                        {
                            row.theta_star = b->theta;
                            row.tau_bound = b->tau;
                            row.alpha = b->alpha;
                            row.beta = b->beta;
                            row.expected_bound = b->expected;
                        }
                        else
                        {
                            row.tau_bound = std::numeric_limits<double>::infinity();
                            add_reason(row.reason, b->reason);
                        }
                    }

                    if (want_sim)
                    {
                        row.seed = s.seeds[r];
                        const auto& set = samples[c * n_seeds + r];
                        if (!stable[c])
                        {
                            if (!b || b->reason != "unstable")
                                add_reason(row.reason, "unstable");
                        }
                        else
                        {
                            row.n_samples = set->values.size();
                            try
                            {
                                const auto q = estimate_quantile(*set, 1.0 - s.epsilons[e]);
                                row.tau_sim = q.value;
                                row.ci_lo = q.ci_lo;
                                row.ci_hi = q.ci_hi;
                            }
                            catch (const InsufficientSamples&)
                            {
                                add_reason(row.reason, "insufficient-samples");
                            }
                        }
                    }

                    if (s.mode == Mode::Compare && b && b->available && b->applies_to_simulation && row.ci_lo)
                        row.violation = *row.ci_lo > b->tau;
                    rows.push_back(std::move(row));
                }
            }
        }
        return rows;
    }
}

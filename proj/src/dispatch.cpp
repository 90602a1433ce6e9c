#include "fjb/dispatch.hpp"

#include "fjb/envelope.hpp"
#include "fjb/error.hpp"
#include "fjb/quadrature.hpp"
#include "fjb/theta_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fjb
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        double mean_of_max(const Distribution& d, int k)
        {
            if (k == 1)
                return d.mean();
            return integrate_decaying([&](double x) { return -std::expm1(k * std::log1p(-d.survival(x))); }, d.mean());
        }

        double mean_of_min(const Distribution& d, int k)
        {
            if (k == 1)
                return d.mean();
            return integrate_decaying([&](double x) { return std::pow(d.survival(x), k); }, d.mean() / k);
        }

        bool exponential_tasks(const Topology& t)
        {
            return std::holds_alternative<Exponential>(t.task_service.params()) && t.job_tasks == 1;
        }

        double exponential_rate(const Topology& t) { return std::get<Exponential>(t.task_service.params()).rate; }

        ThinningPolicy thinning_policy(const Topology& t)
        {
            if (t.assignment == Assignment::RoundRobin)
                return RoundRobin{};
            const auto p = t.branch_probabilities();
            // The bound grows with p, so the busiest branch bounds every branch.
            return RandomThinning{*std::max_element(p.begin(), p.end())};
        }

        /// Service envelope whose domain limits theta for the topology.
        Envelope governing_service(const Topology& t)
        {
            const auto task = gi_service_envelope(t.task_service);
            switch (t.kind)
            {
            case SystemKind::SplitMerge:
                return splitmerge_service_envelope(t.task_service, t.k);
            case SystemKind::Replication:
                return replication_service_envelope(t.task_service, t.k);
            case SystemKind::SingleServer:
            case SystemKind::Thinned:
                return aggregate_service_envelope(task, t.job_tasks);
            default:
                return task;
            }
        }
    }

    double utilization(const Topology& t)
    {
        const double lambda = 1.0 / t.arrival.mean();
        const double q = t.task_service.mean();
        switch (t.kind)
        {
        case SystemKind::SingleServer:
            return lambda * t.job_tasks * q;
        case SystemKind::ForkJoin:
        case SystemKind::MultiStage:
        case SystemKind::SingleQueueForkJoin:
            return lambda * q;
        case SystemKind::SplitMerge:
            return lambda * mean_of_max(t.task_service, t.k);
        case SystemKind::Replication:
            return lambda * mean_of_min(t.task_service, t.k);
        case SystemKind::Thinned:
        {
            const auto p = t.branch_probabilities();
            return lambda * *std::max_element(p.begin(), p.end()) * t.job_tasks * q;
        }
        case SystemKind::SingleQueueMultiServer:
            return lambda * t.job_tasks * q / t.k;
        }
        return kInf;
    }

    Increments resolve_increments(const Topology& t, IncrementsChoice choice)
    {
        if (t.kind == SystemKind::MultiStage)
            return Increments::General;
        switch (choice)
        {
        case IncrementsChoice::Independent:
            return Increments::Independent;
        case IncrementsChoice::General:
            return Increments::General;
        case IncrementsChoice::Auto:
            break;
        }
        // Renewal arrivals and iid task draws keep every dispatched envelope renewal.
        return Increments::Independent;
    }

    TailBound bound_at(const Topology& t, Metric metric, double theta, Increments mode)
    {
        const auto arrival = gi_arrival_envelope(t.arrival);
        const bool sojourn = metric == Metric::Sojourn;
        switch (t.kind)
        {
        case SystemKind::SingleServer:
        case SystemKind::SplitMerge:
        case SystemKind::Replication:
        {
            auto pair = gg1_bounds(arrival, governing_service(t), theta, mode);
            return sojourn ? pair.sojourn : pair.waiting;
        }
        case SystemKind::ForkJoin:
        {
            auto pair = forkjoin_bounds(arrival, gi_service_envelope(t.task_service), t.k, theta, mode);
            return sojourn ? pair.sojourn : pair.waiting;
        }
        case SystemKind::Thinned:
        {
            auto pair = thinned_forkjoin_bounds(arrival, governing_service(t), t.branches(), t.fork_width,
                                                thinning_policy(t), theta, t.resequencing, mode);
            return sojourn ? pair.sojourn : pair.waiting;
        }
        case SystemKind::SingleQueueMultiServer:
        {
            if (!exponential_tasks(t))
                throw InvalidSpec("single-queue bounds need exponential tasks with job_tasks = 1");
            auto pair = sq_multiserver_bounds(arrival, exponential_rate(t), t.k, theta, mode);
            return sojourn ? pair.sojourn : pair.waiting;
        }
        case SystemKind::SingleQueueForkJoin:
        {
            if (!exponential_tasks(t))
                throw InvalidSpec("single-queue bounds need exponential tasks");
            auto b = sq_forkjoin_bounds(arrival, exponential_rate(t), t.k, theta, mode);
            return sojourn ? b.sojourn : b.waiting_per_task.back();
        }
        case SystemKind::MultiStage:
            if (!sojourn)
                throw InvalidSpec("no waiting-time bound for multistage networks");
            return multistage_bounds(arrival, gi_service_envelope(t.task_service), t.k, t.h, theta);
        }
        throw InvalidSpec("unknown system kind");
    }

    ThetaInterval theta_search_interval(const Topology& t)
    {
        const auto arrival = gi_arrival_envelope(t.arrival);
        if (t.kind == SystemKind::SingleQueueMultiServer || t.kind == SystemKind::SingleQueueForkJoin)
        {
            if (!exponential_tasks(t))
                throw InvalidSpec("single-queue bounds need exponential tasks with job_tasks = 1");
            return arrival.domain().intersect({0.0, t.k * exponential_rate(t)});
        }
        return search_interval(arrival, governing_service(t));
    }

    BoundOutcome compute_bound(const Topology& t, Metric metric, double epsilon, const ThetaPolicy& policy,
                               IncrementsChoice increments)
    {
        BoundOutcome out;
        out.mode = resolve_increments(t, increments);
        out.applies_to_simulation = !(t.kind == SystemKind::MultiStage && t.stage_service == StageService::Identical);
        out.tau = kInf;

        if (t.kind == SystemKind::MultiStage && metric == Metric::Waiting)
        {
            out.reason = "no-waiting-bound";
            return out;
        }
        if ((t.kind == SystemKind::SingleQueueMultiServer || t.kind == SystemKind::SingleQueueForkJoin) &&
            !exponential_tasks(t))
        {
            out.reason = "needs-exponential-tasks";
            return out;
        }
        if (t.task_service.mgf_abscissa() <= 0.0)
        {
            out.reason = "heavy-tailed-service";
            return out;
        }
        if (!(utilization(t) < 1.0))
        {
            out.reason = "unstable";
            return out;
        }

        auto factory = [&](double theta) { return bound_at(t, metric, theta, out.mode); };
        try
        {
            if (policy.optimize)
            {
                auto best = optimize_theta(factory, theta_search_interval(t), epsilon);
                out.theta = best.theta;
                out.tau = best.tau;
                out.bound = std::move(best.bound);
            }
            else
            {
                out.bound = factory(policy.theta);
                out.theta = policy.theta;
                out.tau = invert_quantile(*out.bound, epsilon);
            }
        }
        catch (const InfeasibleTheta&)
        {
            out.reason = "infeasible-theta";
            out.bound.reset();
            return out;
        }
        catch (const InfeasibleSystem&)
        {
            out.reason = "infeasible";
            return out;
        }
        catch (const DomainError&)
        {
            out.reason = "theta-outside-domain";
            out.bound.reset();
            return out;
        }

        out.available = true;
        out.alpha = out.bound->meta().alpha;
        out.beta = out.bound->meta().beta;
        if (metric == Metric::Sojourn && (t.kind == SystemKind::ForkJoin || t.kind == SystemKind::SingleServer))
        {
            const int k = t.kind == SystemKind::ForkJoin ? t.k : 1;
            const auto service = t.kind == SystemKind::ForkJoin ? gi_service_envelope(t.task_service)
                                                                : governing_service(t);
            out.expected = expected_sojourn_bound(gi_arrival_envelope(t.arrival), service, k, out.theta, out.mode);
        }
        return out;
    }
}

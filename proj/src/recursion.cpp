#include "fjb/recursion.hpp"

#include "fjb/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fjb
{
    namespace
    {
        double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

        void set_starts(std::vector<double>* starts, double v)
        {
            if (starts)
                starts->assign(1, v);
        }

        class SingleServerRecursion final : public Recursion
        {
        public:
            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                const double v = std::max(a, last_);
                last_ = v + sum(q);
                set_starts(starts, v);
                return {last_, v - a};
            }

        private:
            double last_ = 0.0;
        };

        class ForkJoinRecursion final : public Recursion
        {
        public:
            explicit ForkJoinRecursion(int k) : free_(static_cast<std::size_t>(k), 0.0) {}

            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                if (starts)
                    starts->resize(free_.size());
                double d = a;
                double v_max = a;
                for (std::size_t i = 0; i < free_.size(); ++i)
                {
                    const double v = std::max(a, free_[i]);
                    free_[i] = v + q[i];
                    d = std::max(d, free_[i]);
                    v_max = std::max(v_max, v);
                    if (starts)
                        (*starts)[i] = v;
                }
                return {d, v_max - a};
            }

        private:
            std::vector<double> free_;
        };

        class SplitMergeRecursion final : public Recursion
        {
        public:
            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                const double v = std::max(a, last_);
                last_ = v + *std::max_element(q.begin(), q.end());
                set_starts(starts, v);
                return {last_, v - a};
            }

        private:
            double last_ = 0.0;
        };

        class ReplicationRecursion final : public Recursion
        {
        public:
            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                const double v = std::max(a, last_);
                last_ = v + *std::min_element(q.begin(), q.end());
                set_starts(starts, v);
                return {last_, v - a};
            }

        private:
            double last_ = 0.0;
        };

        class ThinnedRecursion final : public Recursion
        {
        public:
            ThinnedRecursion(int branches, int width, int job_tasks, bool resequencing)
                : width_(width), job_tasks_(job_tasks), resequencing_(resequencing),
                  free_(static_cast<std::size_t>(branches) * width, 0.0)
            {
            }

            JobOutcome step(double a, std::span<const double> q, int branch, std::vector<double>* starts) override
            {
                if (starts)
                    starts->resize(static_cast<std::size_t>(width_));
                double d = a;
                double v_max = a;
                for (int j = 0; j < width_; ++j)
                {
                    double& server = free_[static_cast<std::size_t>(branch) * width_ + j];
                    const double v = std::max(a, server);
                    server = v + sum(q.subspan(static_cast<std::size_t>(j) * job_tasks_, job_tasks_));
                    d = std::max(d, server);
                    v_max = std::max(v_max, v);
                    if (starts)
                        (*starts)[j] = v;
                }
                if (resequencing_)
                {
                    d = std::max(d, released_);
                    released_ = d;
                }
                return {d, v_max - a};
            }

        private:
            int width_;
            int job_tasks_;
            bool resequencing_;
            std::vector<double> free_;
            double released_ = 0.0;
        };

        /// Min-heap of the times at which each of k servers next becomes free.
        class SlotHeap
        {
        public:
            explicit SlotHeap(int k) : slots_(static_cast<std::size_t>(k), 0.0) {}

            double top() const { return slots_.front(); }

            /// Replaces the earliest slot by `value` (>= top()).
            void replace_top(double value)
            {
                const std::size_t n = slots_.size();
                std::size_t i = 0;
                for (;;)
                {
                    std::size_t child = 2 * i + 1;
                    if (child >= n)
                        break;
                    if (child + 1 < n && slots_[child + 1] < slots_[child])
                        ++child;
                    if (!(slots_[child] < value))
                        break;
                    slots_[i] = slots_[child];
                    i = child;
                }
                slots_[i] = value;
            }

        private:
            std::vector<double> slots_;
        };

        class SingleQueueMultiServerRecursion final : public Recursion
        {
        public:
            explicit SingleQueueMultiServerRecursion(int k) : slots_(k) {}

            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                const double v = std::max(a, slots_.top());
                const double d = v + sum(q);
                slots_.replace_top(d);
                set_starts(starts, v);
                return {d, v - a};
            }

        private:
            SlotHeap slots_;
        };

        class SingleQueueForkJoinRecursion final : public Recursion
        {
        public:
            explicit SingleQueueForkJoinRecursion(int k) : slots_(k) {}

            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                if (starts)
                    starts->resize(q.size());
                double d = a;
                double v = a;
                for (std::size_t i = 0; i < q.size(); ++i)
                {
                    v = std::max(a, slots_.top());
                    slots_.replace_top(v + q[i]);
                    d = std::max(d, v + q[i]);
                    if (starts)
                        (*starts)[i] = v;
                }
                return {d, v - a};
            }

        private:
            SlotHeap slots_;
        };

        class MultiStageRecursion final : public Recursion
        {
        public:
            MultiStageRecursion(int h, int k, bool identical)
                : h_(h), k_(k), identical_(identical), free_(static_cast<std::size_t>(h) * k, 0.0)
            {
            }

            JobOutcome step(double a, std::span<const double> q, int, std::vector<double>* starts) override
            {
                if (starts)
                    starts->resize(free_.size());
                double stage_arrival = a;
                double waiting = 0.0;
                for (int s = 0; s < h_; ++s)
                {
                    const auto stage_q = q.subspan(identical_ ? 0 : static_cast<std::size_t>(s) * k_, k_);
                    double d = stage_arrival;
                    double v_max = stage_arrival;
                    for (int i = 0; i < k_; ++i)
                    {
                        double& server = free_[static_cast<std::size_t>(s) * k_ + i];
                        const double v = std::max(stage_arrival, server);
                        server = v + stage_q[i];
                        d = std::max(d, server);
                        v_max = std::max(v_max, v);
                        if (starts)
                            (*starts)[static_cast<std::size_t>(s) * k_ + i] = v;
                    }
                    waiting += v_max - stage_arrival;
                    stage_arrival = d;
                }
                return {stage_arrival, waiting};
            }

        private:
            int h_;
            int k_;
            bool identical_;
            std::vector<double> free_;
        };
    }

    std::unique_ptr<Recursion> make_recursion(const Topology& t)
    {
        t.validate();
        switch (t.kind)
        {
        case SystemKind::SingleServer:
            return std::make_unique<SingleServerRecursion>();
        case SystemKind::ForkJoin:
            return std::make_unique<ForkJoinRecursion>(t.k);
        case SystemKind::SplitMerge:
            return std::make_unique<SplitMergeRecursion>();
        case SystemKind::Replication:
            return std::make_unique<ReplicationRecursion>();
        case SystemKind::Thinned:
            return std::make_unique<ThinnedRecursion>(t.branches(), t.fork_width, t.job_tasks, t.resequencing);
        case SystemKind::SingleQueueMultiServer:
            return std::make_unique<SingleQueueMultiServerRecursion>(t.k);
        case SystemKind::SingleQueueForkJoin:
            return std::make_unique<SingleQueueForkJoinRecursion>(t.k);
        case SystemKind::MultiStage:
            return std::make_unique<MultiStageRecursion>(t.h, t.k, t.stage_service == StageService::Identical);
        }
        throw InvalidSpec("unknown system kind");
    }

    std::vector<double> maxplus_departures(const Topology& topology, std::span<const double> arrivals,
                                           std::span<const double> services, std::span<const int> branches)
    {
        auto recursion = make_recursion(topology);
        const std::size_t n = arrivals.size();
        const std::size_t per_job = static_cast<std::size_t>(topology.drawn_stages()) * topology.draws_per_stage();
        if (services.size() != n * per_job)
            throw InvalidInput("expected " + std::to_string(n * per_job) + " service values for " +
                               std::to_string(n) + " jobs, got " + std::to_string(services.size()));
        const bool needs_branches = topology.kind == SystemKind::Thinned && topology.assignment == Assignment::Random;
        if (!branches.empty() && branches.size() != n)
            throw InvalidInput("expected one branch per job");
        if (needs_branches && branches.empty())
            throw InvalidInput("random assignment requires explicit branches");

        std::vector<double> departures(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i > 0 && arrivals[i] < arrivals[i - 1])
                throw InvalidInput("arrivals must be nondecreasing");
            int branch = 0;
            if (!branches.empty())
                branch = branches[i];
            else if (topology.kind == SystemKind::Thinned)
                branch = static_cast<int>(i % static_cast<std::size_t>(topology.branches()));
            if (branch < 0 || branch >= topology.branches())
                throw InvalidInput("branch index out of range");
            departures[i] = recursion->step(arrivals[i], services.subspan(i * per_job, per_job), branch, nullptr).departure;
        }
        return departures;
    }

    std::vector<JobRecord> maxplus_trace(const Topology& topology, const DrawnTrace& trace)
    {
        auto recursion = make_recursion(topology);
        if (trace.width != topology.draws_per_stage() || trace.stages != topology.drawn_stages() ||
            trace.services.size() != trace.size() * static_cast<std::size_t>(trace.width) * trace.stages ||
            trace.branches.size() != trace.size())
            throw InvalidInput("trace shape does not match the topology");
        std::vector<JobRecord> records;
        records.reserve(trace.size());
        for (std::size_t i = 0; i < trace.size(); ++i)
        {
            JobRecord r;
            r.n = i + 1;
            r.arrival = trace.arrivals[i];
            const auto q = trace.job_services(i);
            r.services.assign(q.begin(), q.end());
            const auto out = recursion->step(r.arrival, q, trace.branches[i], &r.starts);
            r.departure = out.departure;
            r.waiting = out.waiting;
            r.sojourn = out.departure - r.arrival;
            records.push_back(std::move(r));
        }
        return records;
    }
}

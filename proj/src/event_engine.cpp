#include "fjb/event_engine.hpp"

#include "fjb/error.hpp"
#include "fjb/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace fjb
{
    namespace
    {
        enum class EventType
        {
            Arrival,
            Completion,
        };

        struct Event
        {
            double time;
            std::uint64_t seq;
            EventType type;
            std::size_t job;
            int stage;
            int server;
        };

        struct Later
        {
            bool operator()(const Event& a, const Event& b) const
            {
                return a.time != b.time ? a.time > b.time : a.seq > b.seq;
            }
        };

        struct Task
        {
            std::size_t job;
            int stage;
            double service;
        };

        struct Server
        {
            bool busy = false;
            Task current{};
            std::deque<Task> queue; // multi-queue systems only
        };

        class Engine
        {
        public:
            Engine(const Topology& t, const DrawnTrace& trace)
                : t_(t), trace_(trace), out_(trace.size(), {std::numeric_limits<double>::quiet_NaN(), -1.0}),
                  remaining_(trace.size(), 0), finished_(trace.size(), false)
            {
                switch (t.kind)
                {
                case SystemKind::SingleServer:
                    servers_.resize(1);
                    break;
                case SystemKind::MultiStage:
                    servers_.resize(static_cast<std::size_t>(t.h) * t.k);
                    break;
                case SystemKind::SplitMerge:
                case SystemKind::Replication:
                    break;
                default:
                    servers_.resize(static_cast<std::size_t>(t.k));
                }
                idle_ = t.k;
            }

            std::vector<EventRecord> run()
            {
                if (trace_.size() > 0)
                    schedule(trace_.arrivals[0], EventType::Arrival, 0, 0, -1);
                while (!events_.empty())
                {
                    const Event e = events_.top();
                    events_.pop();
                    now_ = e.time;
                    if (e.type == EventType::Arrival)
                    {
                        if (e.stage == 0 && e.job + 1 < trace_.size())
                            schedule(trace_.arrivals[e.job + 1], EventType::Arrival, e.job + 1, 0, -1);
                        on_arrival(e.job, e.stage);
                    }
                    else
                        on_completion(e);
                }
                return std::move(out_);
            }

        private:
            void schedule(double time, EventType type, std::size_t job, int stage, int server)
            {
                events_.push({time, seq_++, type, job, stage, server});
            }

            double draw(std::size_t job, int stage, int index) const
            {
                const auto q = trace_.job_services(job);
                const int s = trace_.stages == 1 ? 0 : stage;
                return q[static_cast<std::size_t>(s) * trace_.width + index];
            }

            double draw_sum(std::size_t job, int first, int count) const
            {
                double total = 0.0;
                for (int i = 0; i < count; ++i)
                    total += draw(job, 0, first + i);
                return total;
            }

            void note_start(std::size_t job, int stage)
            {
                if (stage == 0)
                    out_[job].last_start = std::max(out_[job].last_start, now_);
            }

            // Multi-queue servers -------------------------------------------------

            void enqueue(int server, Task task)
            {
                Server& s = servers_[static_cast<std::size_t>(server)];
                if (!s.busy)
                    start(server, task);
                else
                    s.queue.push_back(task);
            }

            void start(int server, Task task)
            {
                Server& s = servers_[static_cast<std::size_t>(server)];
                s.busy = true;
                s.current = task;
                note_start(task.job, task.stage);
                schedule(now_ + task.service, EventType::Completion, task.job, task.stage, server);
            }

            void release(int server)
            {
                Server& s = servers_[static_cast<std::size_t>(server)];
                s.busy = false;
                if (!s.queue.empty())
                {
                    const Task next = s.queue.front();
                    s.queue.pop_front();
                    start(server, next);
                }
            }

            // Shared queue for single-queue systems --------------------------------

            void offer(Task task)
            {
                if (idle_ > 0)
                {
                    --idle_;
                    note_start(task.job, task.stage);
                    schedule(now_ + task.service, EventType::Completion, task.job, task.stage, 0);
                }
                else
                    shared_.push_back(task);
            }

            void free_slot()
            {
                if (shared_.empty())
                {
                    ++idle_;
                    return;
                }
                const Task next = shared_.front();
                shared_.pop_front();
                note_start(next.job, next.stage);
                schedule(now_ + next.service, EventType::Completion, next.job, next.stage, 0);
            }

            // Job-level queue for split-merge and replication ---------------------

            void begin_job(std::size_t job)
            {
                busy_job_ = true;
                current_job_ = job;
                note_start(job, 0);
                remaining_[job] = t_.k;
                for (int i = 0; i < t_.k; ++i)
                    schedule(now_ + draw(job, 0, i), EventType::Completion, job, 0, i);
            }

            void end_job()
            {
                busy_job_ = false;
                if (!jobs_.empty())
                {
                    const std::size_t next = jobs_.front();
                    jobs_.pop_front();
                    begin_job(next);
                }
            }

            // Departure handling --------------------------------------------------

            void depart(std::size_t job)
            {
                if (!t_.resequencing)
                {
                    out_[job].departure = now_;
                    return;
                }
                finished_[job] = true;
                while (next_release_ < finished_.size() && finished_[next_release_])
                    out_[next_release_++].departure = now_;
            }

            void on_arrival(std::size_t job, int stage)
            {
                switch (t_.kind)
                {
                case SystemKind::SingleServer:
                    enqueue(0, {job, 0, draw_sum(job, 0, t_.job_tasks)});
                    break;
                case SystemKind::ForkJoin:
                    remaining_[job] = t_.k;
                    for (int i = 0; i < t_.k; ++i)
                        enqueue(i, {job, 0, draw(job, 0, i)});
                    break;
                case SystemKind::MultiStage:
                    remaining_[job] = t_.k;
                    for (int i = 0; i < t_.k; ++i)
                        enqueue(stage * t_.k + i, {job, stage, draw(job, stage, i)});
                    break;
                case SystemKind::Thinned:
                {
                    const int branch = trace_.branches[job];
                    remaining_[job] = t_.fork_width;
                    for (int j = 0; j < t_.fork_width; ++j)
                        enqueue(branch * t_.fork_width + j, {job, 0, draw_sum(job, j * t_.job_tasks, t_.job_tasks)});
                    break;
                }
                case SystemKind::SplitMerge:
                case SystemKind::Replication:
                    if (busy_job_)
                        jobs_.push_back(job);
                    else
                        begin_job(job);
                    break;
                case SystemKind::SingleQueueMultiServer:
                    offer({job, 0, draw_sum(job, 0, t_.job_tasks)});
                    break;
                case SystemKind::SingleQueueForkJoin:
                    remaining_[job] = t_.k;
                    for (int i = 0; i < t_.k; ++i)
                        offer({job, 0, draw(job, 0, i)});
                    break;
                }
            }

            void on_completion(const Event& e)
            {
                switch (t_.kind)
                {
                case SystemKind::SingleServer:
                    release(e.server);
                    depart(e.job);
                    break;
                case SystemKind::ForkJoin:
                case SystemKind::Thinned:
                    release(e.server);
                    if (--remaining_[e.job] == 0)
                        depart(e.job);
                    break;
                case SystemKind::MultiStage:
                    release(e.server);
                    if (--remaining_[e.job] == 0)
                    {
                        if (e.stage + 1 < t_.h)
                            schedule(now_, EventType::Arrival, e.job, e.stage + 1, -1);
                        else
                            depart(e.job);
                    }
                    break;
                case SystemKind::SplitMerge:
                    if (--remaining_[e.job] == 0)
                    {
                        depart(e.job);
                        end_job();
                    }
                    break;
                case SystemKind::Replication:
                    // Purged copies still complete in the event list; ignore them.
                    if (busy_job_ && current_job_ == e.job && remaining_[e.job] == t_.k)
                    {
                        remaining_[e.job] = 0;
                        depart(e.job);
                        end_job();
                    }
                    break;
                case SystemKind::SingleQueueMultiServer:
                    free_slot();
                    depart(e.job);
                    break;
                case SystemKind::SingleQueueForkJoin:
                    free_slot();
                    if (--remaining_[e.job] == 0)
                        depart(e.job);
                    break;
                }
            }

            const Topology& t_;
            const DrawnTrace& trace_;
            std::vector<EventRecord> out_;
            std::vector<int> remaining_;
            std::vector<bool> finished_;
            std::size_t next_release_ = 0;
            std::priority_queue<Event, std::vector<Event>, Later> events_;
            std::uint64_t seq_ = 0;
            double now_ = 0.0;
            std::vector<Server> servers_;
            std::deque<Task> shared_;
            int idle_ = 0;
            std::deque<std::size_t> jobs_;
            bool busy_job_ = false;
            std::size_t current_job_ = 0;
        };
    }

    std::vector<EventRecord> run_event_engine(const Topology& topology, const DrawnTrace& trace)
    {
        topology.validate();
        if (trace.stages != topology.drawn_stages() || trace.width != topology.draws_per_stage() ||
            trace.branches.size() != trace.size() ||
            trace.services.size() != trace.size() * static_cast<std::size_t>(trace.width) * trace.stages)
            throw InvalidInput("trace does not match topology");
        return Engine(topology, trace).run();
    }

    double crosscheck_engine(const Topology& topology, std::size_t n_jobs, std::uint64_t seed)
    {
        const auto trace = draw_trace(topology, n_jobs, seed);
        const auto events = run_event_engine(topology, trace);
        const auto records = maxplus_trace(topology, trace);
        double worst = 0.0;
        for (std::size_t i = 0; i < records.size(); ++i)
        {
            const double gap = std::abs(events[i].departure - records[i].departure);
            worst = std::max(worst, std::isnan(gap) ? std::numeric_limits<double>::infinity() : gap);
        }
        return worst;
    }
}

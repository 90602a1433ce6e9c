#include "fjb/audit.hpp"

#include "fjb/error.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <tuple>
#include <utility>

namespace fjb
{
    std::size_t work_conservation_violations(const Topology& topology, const std::vector<JobRecord>& records)
    {
        const bool fork = topology.kind == SystemKind::SingleQueueForkJoin;
        if (!fork && topology.kind != SystemKind::SingleQueueMultiServer)
            throw InvalidSpec("work conservation audit applies to single-queue systems");

        // (time, busy delta, queued delta)
        std::vector<std::tuple<double, int, int>> events;
        auto add = [&](double arrival, double start, double service) {
            if (start > arrival)
            {
                events.emplace_back(arrival, 0, 1);
                events.emplace_back(start, 0, -1);
            }
            if (service > 0.0)
            {
                events.emplace_back(start, 1, 0);
                events.emplace_back(start + service, -1, 0);
            }
        };
        for (const auto& r : records)
        {
            if (fork)
                for (std::size_t i = 0; i < r.starts.size(); ++i)
                    add(r.arrival, r.starts[i], r.services[i]);
            else
                add(r.arrival, r.starts.front(), std::accumulate(r.services.begin(), r.services.end(), 0.0));
        }
        std::sort(events.begin(), events.end(),
                  [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });

        std::size_t violations = 0;
        int busy = 0;
        int queued = 0;
        for (std::size_t i = 0; i < events.size();)
        {
            const double t = std::get<0>(events[i]);
            for (; i < events.size() && std::get<0>(events[i]) == t; ++i)
            {
                busy += std::get<1>(events[i]);
                queued += std::get<2>(events[i]);
            }
            if (i < events.size() && queued > 0 && busy < topology.k)
                ++violations;
        }
        return violations;
    }

    std::size_t overtaking_events(const std::vector<JobRecord>& records)
    {
        std::size_t count = 0;
        for (std::size_t i = 1; i < records.size(); ++i)
            if (records[i].departure < records[i - 1].departure)
                ++count;
        return count;
    }

    void write_trace_csv(std::ostream& out, const std::vector<JobRecord>& records)
    {
        const std::size_t width = records.empty() ? 1 : records.front().starts.size();
        out << "n,A";
        if (width == 1)
            out << ",V";
        else
            for (std::size_t i = 1; i <= width; ++i)
                out << ",V_" << i;
        out << ",D,W,T\n";
        char buf[32];
        auto put = [&](double x) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ',' << buf;
        };
        for (const auto& r : records)
        {
            out << r.n;
            put(r.arrival);
            for (double v : r.starts)
                put(v);
            put(r.departure);
            put(r.waiting);
            put(r.sojourn);
            out << '\n';
        }
    }
}

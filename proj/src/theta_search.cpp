#include "fjb/theta_search.hpp"

#include "fjb/error.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace fjb
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();
        constexpr int kGridPoints = 128;
        constexpr double kGolden = 0.6180339887498949;
    }

    ThetaInterval search_interval(const Envelope& arrival, const Envelope& service)
    {
        auto interval = arrival.domain().intersect(service.domain());
        if (std::isinf(interval.hi))
            interval.hi = 50.0 / service.mean();
        if (interval.empty())
            throw InfeasibleSystem("empty theta search interval");
        return interval;
    }

    ThetaOptimum optimize_theta(const BoundFactory& factory, ThetaInterval search, double epsilon)
    {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw InvalidSpec("epsilon must lie in (0, 1)");
        if (search.empty() || !std::isfinite(search.hi))
            throw InvalidSpec("theta search interval must be finite and nonempty");

        auto quantile_at = [&](double theta) {
            try
            {
                return invert_quantile(factory(theta), epsilon);
            }
            catch (const InfeasibleTheta&)
            {
                return kInf;
            }
            catch (const DomainError&)
            {
                return kInf;
            }
        };

        const double delta = 1e-9 * (search.hi - search.lo);
        const double lo = search.lo + delta;
        const double hi = search.hi - delta;
        std::array<double, kGridPoints> grid{};
        std::array<double, kGridPoints> value{};
        int best = -1;
        for (int i = 0; i < kGridPoints; ++i)
        {
            grid[i] = lo + (hi - lo) * i / (kGridPoints - 1);
            value[i] = quantile_at(grid[i]);
            if (std::isfinite(value[i]) && (best < 0 || value[i] < value[best] - 1e-12 * std::abs(value[best])))
                best = i;
        }
        if (best < 0)
            throw InfeasibleSystem("no feasible theta in (" + std::to_string(search.lo) + ", " +
                                   std::to_string(search.hi) + ")");

        double best_theta = grid[best];
        double best_tau = value[best];
        auto consider = [&](double theta, double tau) {
            if (tau < best_tau)
            {
                best_theta = theta;
                best_tau = tau;
            }
        };

        double a = grid[std::max(best - 1, 0)];
        double b = grid[std::min(best + 1, kGridPoints - 1)];
        double c = b - kGolden * (b - a);
        double d = a + kGolden * (b - a);
        double fc = quantile_at(c);
        double fd = quantile_at(d);
        consider(c, fc);
        consider(d, fd);
        while ((b - a) > 1e-8 * 0.5 * (std::abs(a) + std::abs(b)))
        {
            if (fc <= fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - kGolden * (b - a);
                fc = quantile_at(c);
                consider(c, fc);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + kGolden * (b - a);
                fd = quantile_at(d);
                consider(d, fd);
            }
        }

        // Optimum pressed against the stability boundary: locate the boundary itself.
        const double probe = std::min(best_theta * (1.0 + 1e-7), hi);
        if (probe > best_theta && std::isinf(quantile_at(probe)))
        {
            double feasible = best_theta;
            double infeasible = probe;
            for (int i = 0; i < 80; ++i)
            {
                const double mid = 0.5 * (feasible + infeasible);
                if (std::isfinite(quantile_at(mid)))
                    feasible = mid;
                else
                    infeasible = mid;
            }
            consider(feasible, quantile_at(feasible));
        }

        auto bound = factory(best_theta);
        bound.meta().search_cap = search.hi;
        return {best_theta, best_tau, std::move(bound)};
    }
}

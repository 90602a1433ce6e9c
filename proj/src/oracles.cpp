#include "fjb/oracles.hpp"

#include "fjb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fjb
{
    double ExactOracleResult::tail(double tau) const { return tau <= 0.0 ? p_wait : p_wait * std::exp(-decay * tau); }

    double ExactOracleResult::quantile(double epsilon) const
    {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw InvalidSpec("epsilon must lie in (0, 1)");
        return std::max(0.0, std::log(p_wait / epsilon) / decay);
    }

    ExactOracleResult exact_mm1_sojourn(double lambda, double mu)
    {
        if (!(lambda > 0.0 && mu > 0.0))
            throw InvalidSpec("rates must be positive");
        if (!(lambda < mu))
            throw Unstable("M|M|1 unstable: lambda " + std::to_string(lambda) + " >= mu " + std::to_string(mu));
        return {OracleKind::MM1SojournTail, 1.0, mu - lambda};
    }

    double erlang_c(double offered_load, int k)
    {
        if (k < 1)
            throw InvalidSpec("k must be >= 1");
        if (!(offered_load > 0.0))
            throw InvalidSpec("offered load must be positive");
        if (!(offered_load < k))
            throw Unstable("Erlang-C undefined for load >= k");
        double b = 1.0;
        for (int j = 1; j <= k; ++j)
            b = offered_load * b / (j + offered_load * b);
        return b / (1.0 - (offered_load / k) * (1.0 - b));
    }

    ExactOracleResult exact_mmk_waiting(double lambda, double mu, int k)
    {
        if (!(lambda > 0.0 && mu > 0.0))
            throw InvalidSpec("rates must be positive");
        if (k < 1)
            throw InvalidSpec("k must be >= 1");
        if (!(lambda < k * mu))
            throw Unstable("M|M|k unstable: lambda >= k mu");
        return {OracleKind::MMkWaitingTail, erlang_c(lambda / mu, k), k * mu - lambda};
    }
}

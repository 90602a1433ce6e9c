#pragma once

namespace fjb
{
    enum class OracleKind
    {
        MM1SojournTail,
        MMkWaitingTail,
    };

    /// Exact tail P[X > tau] = p_wait * e^{-decay * tau}.
    struct ExactOracleResult
    {
        OracleKind kind;
        double p_wait;
        double decay;

        double tail(double tau) const;
        /// Smallest tau with tail(tau) <= epsilon.
        double quantile(double epsilon) const;
    };

    /// Sojourn time of the M|M|1 queue: e^{-(mu - lambda) tau}.
    ExactOracleResult exact_mm1_sojourn(double lambda, double mu);

    /// Waiting time of the M|M|k queue: C(k, lambda/mu) e^{-(k mu - lambda) tau}.
    ExactOracleResult exact_mmk_waiting(double lambda, double mu, int k);

    /// Erlang-C probability of waiting for offered load a = lambda/mu on k servers,
    /// via the Erlang-B recursion B(j) = a B(j-1) / (j + a B(j-1)).
    double erlang_c(double offered_load, int k);
}

#pragma once

#include <limits>
#include <vector>

namespace fjb
{
    /// coeff * tau^power * e^{-decay * tau}. power is 0 except for the removable
    /// singularity of the single-queue sojourn bounds at theta = mu.
    struct TailTerm
    {
        double coeff;
        double decay;
        int power = 0;
    };

    struct BoundMeta
    {
        double alpha = 1.0;
        double beta = 1.0;
        /// rho_arrival(-theta) - rho_service(theta) at theta_used.
        double stability_slack = 0.0;
        /// Upper end of the theta search when the service domain was unbounded.
        double search_cap = std::numeric_limits<double>::quiet_NaN();
    };

    /// P[X > tau] <= sum_i c_i tau^{p_i} e^{-theta_i tau}.
    class TailBound
    {
    public:
        TailBound(std::vector<TailTerm> terms, double theta_used, BoundMeta meta = {});

        double evaluate(double tau) const;

        const std::vector<TailTerm>& terms() const noexcept { return terms_; }
        double theta() const noexcept { return theta_; }
        const BoundMeta& meta() const noexcept { return meta_; }
        BoundMeta& meta() noexcept { return meta_; }

        /// One positive pure exponential, invertible in closed form.
        bool single_exponential() const noexcept;

    private:
        std::vector<TailTerm> terms_;
        double theta_;
        BoundMeta meta_;
    };

    /// Smallest tau >= 0 beyond which the bound stays <= epsilon.
    ///
    /// Closed form ln(c/epsilon)/theta for a single exponential; otherwise the
    /// last crossing is bracketed on a grid and refined by bisection.
    double invert_quantile(const TailBound& bound, double epsilon);
}

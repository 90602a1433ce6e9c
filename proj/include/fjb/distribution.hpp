#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace fjb
{
    struct Deterministic
    {
        double value;
        bool operator==(const Deterministic&) const = default;
    };

    struct Exponential
    {
        double rate;
        bool operator==(const Exponential&) const = default;
    };

    struct Erlang
    {
        int shape;
        double rate;
        bool operator==(const Erlang&) const = default;
    };

    struct Weibull
    {
        double shape;
        double scale;
        bool operator==(const Weibull&) const = default;
    };

    struct Uniform
    {
        double lo;
        double hi;
        bool operator==(const Uniform&) const = default;
    };

    /// Non-negative inter-arrival or service-time distribution.
    ///
    /// Parameters are validated on construction. All MGF helpers work on the
    /// log scale so that e.g. a deterministic value at large theta does not
    /// overflow.
    class Distribution
    {
    public:
        using Params = std::variant<Deterministic, Exponential, Erlang, Weibull, Uniform>;

        explicit Distribution(Params params);

        static Distribution deterministic(double value) { return Distribution(Deterministic{value}); }
        static Distribution exponential(double rate) { return Distribution(Exponential{rate}); }
        static Distribution erlang(int shape, double rate) { return Distribution(Erlang{shape, rate}); }
        static Distribution weibull(double shape, double scale) { return Distribution(Weibull{shape, scale}); }
        static Distribution uniform(double lo, double hi) { return Distribution(Uniform{lo, hi}); }

        const Params& params() const noexcept { return params_; }

        double mean() const;

        /// sup{theta : E[e^{theta X}] < inf}; +infinity for bounded or light tails.
        /// Zero for heavy tails (Weibull shape < 1).
        double mgf_abscissa() const;

        /// ln E[e^{theta X}] for theta < mgf_abscissa(); negative theta always admissible.
        double log_mgf(double theta) const;

        /// P[X > x].
        double survival(double x) const;

        /// Number of uniforms consumed by one draw (Erlang draws sum `shape` exponentials).
        int uniforms_per_draw() const;

        /// Inverse-transform draw from uniforms in [0,1).
        double sample(std::span<const double> uniforms) const;

        /// Short textual form, e.g. "exp:0.5", also accepted by parse_distribution.
        std::string describe() const;

        /// Returns a copy whose time scale is multiplied by `factor` (rates divided).
        Distribution scaled(double factor) const;

        bool operator==(const Distribution&) const = default;

    private:
        Params params_;
    };

    /// Parses "det:2", "exp:0.5", "erlang:4:0.5", "weibull:1.5:1", "uniform:0:2".
    Distribution parse_distribution(std::string_view text);

    enum class MgfMethod
    {
        Auto,        ///< closed form where one exists, quadrature otherwise
        Quadrature,  ///< always integrate the survival function
    };

    /// ln E[e^{theta max(X_1..X_k)}] for iid X_i.
    double log_mgf_of_max(const Distribution& dist, int k, double theta, MgfMethod method = MgfMethod::Auto);

    /// ln E[e^{theta min(X_1..X_k)}] for iid X_i.
    double log_mgf_of_min(const Distribution& dist, int k, double theta, MgfMethod method = MgfMethod::Auto);

    /// Abscissa of the MGF of the minimum of k iid copies.
    double mgf_abscissa_of_min(const Distribution& dist, int k);
}

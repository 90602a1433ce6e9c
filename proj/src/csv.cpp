#include "fjb/csv.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <type_traits>

namespace fjb
{
    const std::string& csv_header()
    {
        static const std::string header =
            "scenario_id,system,metric,k,h,lambda,mu,epsilon,theta_star,tau_bound,tau_sim,ci_lo,ci_hi,n_samples,seed,"
            "alpha,beta,expected_bound,alpha_mode,violation,reason";
        return header;
    }

    std::string format_double(double value)
    {
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        if (std::isnan(value))
            return "nan";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", value);
        return buf;
    }

    namespace
    {
        // RFC 4180 quoting, applied only when needed.
        std::string quote(const std::string& s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
                out += c == '"' ? std::string("\"\"") : std::string(1, c);
            return out + "\"";
        }

        template <typename T>
        std::string opt(const std::optional<T>& v)
        {
            if (!v)
                return "";
            if constexpr (std::is_same_v<T, double>)
                return format_double(*v);
            else if constexpr (std::is_same_v<T, bool>)
                return *v ? "1" : "0";
            else
                return std::to_string(*v);
        }
    }

    void write_csv(std::ostream& out, const std::vector<ResultRow>& rows)
    {
        out << csv_header() << '\n';
        for (const auto& r : rows)
        {
            out << quote(r.scenario_id) << ',' << r.system << ',' << r.metric << ',' << r.k << ',' << r.h << ','
                << format_double(r.lambda) << ',' << format_double(r.mu) << ',' << format_double(r.epsilon) << ','
                << opt(r.theta_star) << ',' << opt(r.tau_bound) << ',' << opt(r.tau_sim) << ',' << opt(r.ci_lo) << ','
                << opt(r.ci_hi) << ',' << opt(r.n_samples) << ',' << opt(r.seed) << ',' << opt(r.alpha) << ','
                << opt(r.beta) << ',' << opt(r.expected_bound) << ',' << r.alpha_mode << ',' << opt(r.violation)
                << ',' << quote(r.reason) << '\n';
        }
    }
}

#include "fjb/config.hpp"

#include "fjb/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace fjb
{
    using nlohmann::json;

    namespace
    {
        class Reader
        {
        public:
            explicit Reader(std::string path) : path_(std::move(path)) {}

            [[noreturn]] void fail(const std::string& field, const std::string& message) const
            {
                throw ConfigError(path_, field, message);
            }

            void only(const json& obj, const std::string& field, std::initializer_list<const char*> keys) const
            {
                if (!obj.is_object())
                    fail(field, "expected an object");
                for (const auto& item : obj.items())
                {
                    bool known = false;
                    for (const char* k : keys)
                        known = known || item.key() == k;
                    if (!known)
                        fail(join(field, item.key()), "unknown field");
                }
            }

            const json& at(const json& obj, const std::string& field, const char* key) const
            {
                if (!obj.contains(key))
                    fail(join(field, key), "missing required field");
                return obj.at(key);
            }

            double number(const json& v, const std::string& field) const
            {
                if (!v.is_number())
                    fail(field, "expected a number");
                return v.get<double>();
            }

            int integer(const json& v, const std::string& field) const
            {
                if (!v.is_number_integer())
                    fail(field, "expected an integer");
                return v.get<int>();
            }

            std::string string(const json& v, const std::string& field) const
            {
                if (!v.is_string())
                    fail(field, "expected a string");
                return v.get<std::string>();
            }

            static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

        private:
            std::string path_;
        };

        Distribution read_distribution(const Reader& r, const json& v, const std::string& field)
        {
            try
            {
                if (v.is_string())
                    return parse_distribution(v.get<std::string>());
                const auto type = r.string(r.at(v, field, "type"), Reader::join(field, "type"));
                auto num = [&](const char* key) { return r.number(r.at(v, field, key), Reader::join(field, key)); };
                if (type == "deterministic")
                {
                    r.only(v, field, {"type", "value"});
                    return Distribution::deterministic(num("value"));
                }
                if (type == "exponential")
                {
                    r.only(v, field, {"type", "rate"});
                    return Distribution::exponential(num("rate"));
                }
                if (type == "erlang")
                {
                    r.only(v, field, {"type", "shape", "rate"});
                    return Distribution::erlang(r.integer(r.at(v, field, "shape"), Reader::join(field, "shape")),
                                                num("rate"));
                }
                if (type == "weibull")
                {
                    r.only(v, field, {"type", "shape", "scale"});
                    return Distribution::weibull(num("shape"), num("scale"));
                }
                if (type == "uniform")
                {
                    r.only(v, field, {"type", "lo", "hi"});
                    return Distribution::uniform(num("lo"), num("hi"));
                }
                r.fail(Reader::join(field, "type"), "unknown distribution type '" + type + "'");
            }
            catch (const InvalidSpec& e)
            {
                r.fail(field, e.what());
            }
        }

        json write_distribution(const Distribution& d)
        {
            return std::visit(
                [](const auto& p) -> json {
                    using P = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<P, Deterministic>)
                        return {{"type", "deterministic"}, {"value", p.value}};
                    else if constexpr (std::is_same_v<P, Exponential>)
                        return {{"type", "exponential"}, {"rate", p.rate}};
                    else if constexpr (std::is_same_v<P, Erlang>)
                        return {{"type", "erlang"}, {"shape", p.shape}, {"rate", p.rate}};
                    else if constexpr (std::is_same_v<P, Weibull>)
                        return {{"type", "weibull"}, {"shape", p.shape}, {"scale", p.scale}};
                    else
                        return {{"type", "uniform"}, {"lo", p.lo}, {"hi", p.hi}};
                },
                d.params());
        }

        KLinked read_klinked(const Reader& r, const json& v, const std::string& field)
        {
            if (v.is_string())
            {
                if (v.get<std::string>() != "k")
                    r.fail(field, "expected an integer or \"k\"");
                return {true, 1};
            }
            return {false, r.integer(v, field)};
        }

        json write_klinked(const KLinked& v) { return v.follows_k ? json("k") : json(v.value); }

        constexpr std::pair<const char*, Mode> kModes[] = {
            {"bound", Mode::BoundOnly}, {"sim", Mode::SimOnly}, {"compare", Mode::Compare}};
        constexpr std::pair<const char*, IncrementsChoice> kIncrements[] = {
            {"auto", IncrementsChoice::Auto},
            {"independent", IncrementsChoice::Independent},
            {"general", IncrementsChoice::General}};
        constexpr std::pair<const char*, Metric> kMetrics[] = {{"sojourn", Metric::Sojourn},
                                                               {"waiting", Metric::Waiting}};
        constexpr std::pair<const char*, Assignment> kAssignments[] = {{"round-robin", Assignment::RoundRobin},
                                                                       {"random", Assignment::Random}};
        constexpr std::pair<const char*, StageService> kStages[] = {{"independent", StageService::Independent},
                                                                    {"identical", StageService::Identical}};

        template <typename E, std::size_t N>
        const char* name_of(const std::pair<const char*, E> (&names)[N], E value)
        {
            for (const auto& [name, v] : names)
                if (v == value)
                    return name;
            return "";
        }

        template <typename E, std::size_t N>
        E read_named(const Reader& r, const json& v, const std::string& field, const std::pair<const char*, E> (&names)[N])
        {
            const auto s = r.string(v, field);
            std::string options;
            for (const auto& [name, value] : names)
            {
                if (s == name)
                    return value;
                options += (options.empty() ? "" : "|") + std::string(name);
            }
            r.fail(field, "expected one of " + options + ", got '" + s + "'");
        }

        TopologySpec read_topology(const Reader& r, const json& v)
        {
            const std::string f = "topology";
            r.only(v, f,
                   {"kind", "k", "h", "assignment", "p", "resequencing", "stage_service", "branches", "job_tasks",
                    "arrival", "task_service"});
            TopologySpec t;
            const auto kind = r.string(r.at(v, f, "kind"), f + ".kind");
            try
            {
                t.kind = parse_system_kind(kind);
            }
            catch (const InvalidSpec& e)
            {
                r.fail(f + ".kind", e.what());
            }
            if (v.contains("k"))
                t.k = r.integer(v["k"], f + ".k");
            if (v.contains("h"))
                t.h = r.integer(v["h"], f + ".h");
            if (v.contains("assignment"))
                t.assignment = read_named(r, v["assignment"], f + ".assignment", kAssignments);
            if (v.contains("p"))
            {
                if (!v["p"].is_array())
                    r.fail(f + ".p", "expected an array of probabilities");
                for (std::size_t i = 0; i < v["p"].size(); ++i)
                    t.probabilities.push_back(r.number(v["p"][i], f + ".p[" + std::to_string(i) + "]"));
            }
            if (v.contains("resequencing"))
            {
                if (!v["resequencing"].is_boolean())
                    r.fail(f + ".resequencing", "expected a boolean");
                t.resequencing = v["resequencing"].get<bool>();
            }
            if (v.contains("stage_service"))
                t.stage_service = read_named(r, v["stage_service"], f + ".stage_service", kStages);
            if (v.contains("branches"))
                t.branches = read_klinked(r, v["branches"], f + ".branches");
            if (v.contains("job_tasks"))
                t.job_tasks = read_klinked(r, v["job_tasks"], f + ".job_tasks");
            t.arrival = read_distribution(r, r.at(v, f, "arrival"), f + ".arrival");
            t.task_service = read_distribution(r, r.at(v, f, "task_service"), f + ".task_service");
            return t;
        }

        json write_topology(const TopologySpec& t)
        {
            json v;
            v["kind"] = std::string(to_string(t.kind));
            v["k"] = t.k;
            v["h"] = t.h;
            v["assignment"] = name_of(kAssignments, t.assignment);
            if (!t.probabilities.empty())
                v["p"] = t.probabilities;
            v["resequencing"] = t.resequencing;
            v["stage_service"] = name_of(kStages, t.stage_service);
            v["branches"] = write_klinked(t.branches);
            v["job_tasks"] = write_klinked(t.job_tasks);
            v["arrival"] = write_distribution(t.arrival);
            v["task_service"] = write_distribution(t.task_service);
            return v;
        }

        std::size_t read_count(const Reader& r, const json& v, const std::string& field)
        {
            if (v.is_number_unsigned() || v.is_number_integer())
            {
                const auto n = v.get<long long>();
                if (n < 1)
                    r.fail(field, "must be >= 1");
                return static_cast<std::size_t>(n);
            }
            // Allow 1e7 style literals as long as they are integral.
            if (v.is_number_float())
            {
                const double x = v.get<double>();
                if (x >= 1.0 && x == std::floor(x) && x < 1e15)
                    return static_cast<std::size_t>(x);
            }
            r.fail(field, "expected a positive integer");
        }
    }

    Topology TopologySpec::instantiate() const
    {
        Topology t;
        t.kind = kind;
        t.k = k;
        t.h = h;
        t.assignment = assignment;
        t.probabilities = probabilities;
        t.resequencing = resequencing;
        t.stage_service = stage_service;
        if (kind == SystemKind::Thinned)
        {
            const int a = branches.resolve(k);
            if (a < 1 || k % a != 0)
                throw InvalidSpec("branches must divide k");
            t.fork_width = k / a;
        }
        t.job_tasks = job_tasks.resolve(k);
        t.arrival = arrival;
        t.task_service = task_service;
        t.validate();
        return t;
    }

    TopologySpec apply_sweep(const TopologySpec& spec, const std::string& parameter, double value)
    {
        TopologySpec t = spec;
        auto as_int = [&](double x) {
            if (!(x >= 1.0 && x == std::floor(x)))
                throw InvalidSpec("sweep value " + std::to_string(x) + " for " + parameter +
                                  " must be a positive integer");
            return static_cast<int>(x);
        };
        if (parameter == "k")
            t.k = as_int(value);
        else if (parameter == "h")
            t.h = as_int(value);
        else if (parameter == "branches")
            t.branches = {false, as_int(value)};
        else if (parameter == "job_tasks")
            t.job_tasks = {false, as_int(value)};
        else if (parameter == "lambda")
        {
            if (!(value > 0.0))
                throw InvalidSpec("lambda must be positive");
            t.arrival = spec.arrival.scaled(1.0 / (value * spec.arrival.mean()));
        }
        else if (parameter == "mu")
        {
            if (!(value > 0.0))
                throw InvalidSpec("mu must be positive");
            t.task_service = spec.task_service.scaled(1.0 / (value * spec.task_service.mean()));
        }
        else
            throw InvalidSpec("unknown sweep parameter '" + parameter + "'");
        return t;
    }

    void Scenario::validate() const
    {
        if (id.empty())
            throw InvalidSpec("scenario id must not be empty");
        if (epsilons.empty())
            throw InvalidSpec("at least one epsilon is required");
        for (double e : epsilons)
            if (!(e > 0.0 && e < 1.0))
                throw InvalidSpec("epsilon " + std::to_string(e) + " outside (0, 1)");
        if (seeds.empty())
            throw InvalidSpec("at least one seed is required");
        if (n_jobs < 1 || sample_interval < 1)
            throw InvalidSpec("n_jobs and sample_interval must be >= 1");
        if (!theta_policy.optimize && !(theta_policy.theta > 0.0))
            throw InvalidSpec("fixed theta must be positive");
        if (sweep && sweep->values.empty())
            throw InvalidSpec("sweep needs at least one value");
        for (const auto& cell : cells())
            cell.instantiate();
    }

    std::vector<TopologySpec> Scenario::cells() const
    {
        if (!sweep)
            return {topology};
        std::vector<TopologySpec> out;
        out.reserve(sweep->values.size());
        for (double v : sweep->values)
            out.push_back(apply_sweep(topology, sweep->parameter, v));
        return out;
    }

    Scenario parse_scenario(const std::string& json_text, const std::string& path)
    {
        const Reader r(path);
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error& e)
        {
            r.fail("<document>", e.what());
        }
        r.only(doc, "",
               {"id", "topology", "mode", "epsilons", "sweep", "n_jobs", "sample_interval", "seeds", "theta_policy",
                "increments", "metric"});

        Scenario s;
        s.id = r.string(r.at(doc, "", "id"), "id");
        s.topology = read_topology(r, r.at(doc, "", "topology"));
        if (doc.contains("mode"))
            s.mode = read_named(r, doc["mode"], "mode", kModes);
        if (doc.contains("epsilons"))
        {
            if (!doc["epsilons"].is_array())
                r.fail("epsilons", "expected an array");
            s.epsilons.clear();
            for (std::size_t i = 0; i < doc["epsilons"].size(); ++i)
                s.epsilons.push_back(r.number(doc["epsilons"][i], "epsilons[" + std::to_string(i) + "]"));
        }
        if (doc.contains("sweep"))
        {
            const auto& sw = doc["sweep"];
            r.only(sw, "sweep", {"parameter", "values"});
            SweepAxis axis;
            axis.parameter = r.string(r.at(sw, "sweep", "parameter"), "sweep.parameter");
            const auto& values = r.at(sw, "sweep", "values");
            if (!values.is_array())
                r.fail("sweep.values", "expected an array");
            for (std::size_t i = 0; i < values.size(); ++i)
                axis.values.push_back(r.number(values[i], "sweep.values[" + std::to_string(i) + "]"));
            s.sweep = std::move(axis);
        }
        if (doc.contains("n_jobs"))
            s.n_jobs = read_count(r, doc["n_jobs"], "n_jobs");
        if (doc.contains("sample_interval"))
            s.sample_interval = read_count(r, doc["sample_interval"], "sample_interval");
        if (doc.contains("seeds"))
        {
            if (!doc["seeds"].is_array())
                r.fail("seeds", "expected an array");
            s.seeds.clear();
            for (std::size_t i = 0; i < doc["seeds"].size(); ++i)
            {
                const auto& v = doc["seeds"][i];
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                    r.fail("seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
                s.seeds.push_back(v.get<std::uint64_t>());
            }
        }
        if (doc.contains("theta_policy"))
        {
            const auto& tp = doc["theta_policy"];
            if (tp.is_string())
            {
                if (tp.get<std::string>() != "optimize")
                    r.fail("theta_policy", "expected \"optimize\" or {\"fixed\": theta}");
            }
            else
            {
                r.only(tp, "theta_policy", {"fixed"});
                s.theta_policy = {false, r.number(r.at(tp, "theta_policy", "fixed"), "theta_policy.fixed")};
            }
        }
        if (doc.contains("increments"))
            s.increments = read_named(r, doc["increments"], "increments", kIncrements);
        if (doc.contains("metric"))
            s.metric = read_named(r, doc["metric"], "metric", kMetrics);

        try
        {
            s.validate();
        }
        catch (const InvalidSpec& e)
        {
            r.fail("<scenario>", e.what());
        }
        return s;
    }

    Scenario load_scenario(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError(path, "<file>", "cannot open");
        std::ostringstream text;
        text << in.rdbuf();
        return parse_scenario(text.str(), path);
    }

    std::string serialize_scenario(const Scenario& s)
    {
        json doc;
        doc["id"] = s.id;
        doc["topology"] = write_topology(s.topology);
        doc["mode"] = name_of(kModes, s.mode);
        doc["epsilons"] = s.epsilons;
        if (s.sweep)
            doc["sweep"] = {{"parameter", s.sweep->parameter}, {"values", s.sweep->values}};
        doc["n_jobs"] = s.n_jobs;
        doc["sample_interval"] = s.sample_interval;
        doc["seeds"] = s.seeds;
        if (s.theta_policy.optimize)
            doc["theta_policy"] = "optimize";
        else
            doc["theta_policy"] = {{"fixed", s.theta_policy.theta}};
        doc["increments"] = name_of(kIncrements, s.increments);
        doc["metric"] = name_of(kMetrics, s.metric);
        return doc.dump(2) + "\n";
    }
}

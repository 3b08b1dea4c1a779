#include "risfso_cli/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "risfso/error.hpp"
#include "risfso/simulator.hpp"

namespace risfso::cli
{
namespace
{
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template<class E, std::size_t N>
E parse_enum(std::string_view text, std::array<E, N> const& values, char const* what)
{
    for (E v : values)
    {
        if (to_string(v) == text)
            return v;
    }
    std::string msg = std::string("unknown ") + what + " '" + std::string(text) + "' (expected";
    for (std::size_t i = 0; i < N; ++i)
        msg += (i ? ", " : " ") + std::string(to_string(values[i]));
    throw SchemaError(msg + ")");
}

constexpr std::array all_metrics = {
    MetricName::pdf,       MetricName::cdf,         MetricName::outage,
    MetricName::mgf,       MetricName::capacity,    MetricName::ber,
    MetricName::ber_asymptote, MetricName::mc_outage, MetricName::mc_capacity,
    MetricName::mc_ber,    MetricName::mc_mgf,
};

void add_meta(MetricCurve& c, std::string key, std::string value)
{
    c.meta.push_back({std::move(key), std::move(value)});
}

// Metric value at one point; throws on evaluator failure.
double evaluate(MetricRequest const& m, Scenario const& sc, SweepSpec const& spec,
                OperatingPoint const& op, double x)
{
    bool const threshold_swept = spec.variable == SweepVariable::threshold_db;
    auto const dist = make_distribution(sc, op);
    auto const scheme = m.scheme ? metrics::modulation(*m.scheme) : metrics::ModulationScheme{};
    double const snr_arg = threshold_swept ? db_to_linear(x) : db_to_linear(m.snr_db.value_or(0.0));
    double const threshold
        = threshold_swept ? db_to_linear(x) : db_to_linear(m.threshold_db.value_or(0.0));

    switch (m.name)
    {
        case MetricName::pdf:
            return dist.pdf(snr_arg);
        case MetricName::cdf:
            return dist.cdf(snr_arg);
        case MetricName::outage:
            return metrics::outage_probability(dist, threshold);
        case MetricName::mgf:
            return dist.mgf(*m.s);
        case MetricName::capacity:
            return metrics::ergodic_capacity(dist);
        case MetricName::ber:
            return metrics::average_ber(dist, scheme);
        case MetricName::ber_asymptote:
            return metrics::asymptotic_ber(dist, scheme).value;
        case MetricName::mc_outage:
        case MetricName::mc_capacity:
        case MetricName::mc_ber:
        case MetricName::mc_mgf:
            break;
    }

    simulator::McChannel ch;
    auto const& p = dist.params();
    ch.h = {p.alpha, p.beta, p.zeta, 1.0, p.mean_snr_h};
    ch.g = {p.alpha, p.beta, p.zeta, 1.0, p.mean_snr_g};
    ch.a = p.a;
    ch.chi = p.chi;
    ch.mu = sc.mu;
    simulator::McMetric metric;
    switch (m.name)
    {
        case MetricName::mc_outage:
            metric = simulator::McMetric::outage(threshold);
            break;
        case MetricName::mc_capacity:
            metric = simulator::McMetric::capacity();
            break;
        case MetricName::mc_ber:
            metric = simulator::McMetric::ber(scheme.p, scheme.q);
            break;
        default:
            metric = simulator::McMetric::mgf(*m.s);
            break;
    }
    simulator::McConfig cfg;
    cfg.sample_count = m.samples;
    cfg.seed = spec.seed;
    cfg.threads = 1;
    return simulator::estimate_metric(metric, ch, cfg).mean;
}

MetricCurve describe(MetricRequest const& m, Scenario const& sc, SweepSpec const& spec,
                     std::size_t scenario_index)
{
    MetricCurve c;
    std::ostringstream id;
    id << (sc.label.empty() ? "scenario" + std::to_string(scenario_index) : sc.label) << ":"
       << to_string(m.name);
    if (m.scheme)
        id << ":" << metrics::to_string(*m.scheme);
    c.curve_id = id.str();

    add_meta(c, "variable", std::string(to_string(spec.variable)));
    add_meta(c, "metric", std::string(to_string(m.name)));
    add_meta(c, "label", sc.label);
    add_meta(c, "alpha", format_number(sc.alpha));
    add_meta(c, "beta", format_number(sc.beta));
    add_meta(c, "zeta", spec.variable == SweepVariable::zeta ? "" : format_number(sc.zeta));
    add_meta(c, "a", std::to_string(sc.detection.a));
    add_meta(c, "detection", channel::to_string(sc.detection));
    add_meta(c, "mu", format_number(sc.mu));
    add_meta(c, "split", std::string(to_string(spec.split)));
    bool const mean_swept = spec.variable == SweepVariable::mean_snr_db;
    add_meta(c, "mean_snr_h_db", mean_swept ? "" : format_number(*sc.mean_snr_h_db));
    add_meta(c, "mean_snr_g_db", mean_swept ? "" : format_number(*sc.mean_snr_g_db));
    add_meta(c, "mean_snr_scale", format_number(sc.mean_snr_scale));
    add_meta(c, "scheme", m.scheme ? std::string(metrics::to_string(*m.scheme)) : "");
    bool const threshold_swept = spec.variable == SweepVariable::threshold_db;
    add_meta(c, "threshold_db",
             m.threshold_db && !threshold_swept ? format_number(*m.threshold_db) : "");
    add_meta(c, "snr_db", m.snr_db && !threshold_swept ? format_number(*m.snr_db) : "");
    add_meta(c, "s", m.s ? format_number(*m.s) : "");
    bool const mc = is_monte_carlo(m.name);
    add_meta(c, "seed", mc ? std::to_string(spec.seed) : "");
    add_meta(c, "samples", mc ? std::to_string(m.samples) : "");
    return c;
}

OperatingPoint operating_point(Scenario const& sc, SweepSpec const& spec, double x)
{
    OperatingPoint op;
    op.zeta = sc.zeta;
    if (spec.variable == SweepVariable::mean_snr_db)
    {
        std::tie(op.mean_snr_h, op.mean_snr_g) = split_mean_snr(x, spec.split);
    }
    else
    {
        op.mean_snr_h = db_to_linear(*sc.mean_snr_h_db);
        op.mean_snr_g = db_to_linear(*sc.mean_snr_g_db);
    }
    if (spec.variable == SweepVariable::zeta)
        op.zeta = x;
    if (spec.variable == SweepVariable::threshold_db)
        op.threshold = db_to_linear(x);
    return op;
}

}  // namespace

std::string_view to_string(SnrSplit split)
{
    return split == SnrSplit::product ? "product" : "per_hop";
}

SnrSplit parse_split(std::string_view text)
{
    return parse_enum(text, std::array{SnrSplit::product, SnrSplit::per_hop}, "split");
}

std::string_view to_string(SweepVariable v)
{
    switch (v)
    {
        case SweepVariable::mean_snr_db:
            return "mean_snr_db";
        case SweepVariable::threshold_db:
            return "threshold_db";
        case SweepVariable::zeta:
            return "zeta";
    }
    return "unknown";
}

SweepVariable parse_variable(std::string_view text)
{
    return parse_enum(text,
                      std::array{SweepVariable::mean_snr_db, SweepVariable::threshold_db,
                                 SweepVariable::zeta},
                      "sweep variable");
}

std::string_view to_string(MetricName m)
{
    switch (m)
    {
        case MetricName::pdf:
            return "pdf";
        case MetricName::cdf:
            return "cdf";
        case MetricName::outage:
            return "outage";
        case MetricName::mgf:
            return "mgf";
        case MetricName::capacity:
            return "capacity";
        case MetricName::ber:
            return "ber";
        case MetricName::ber_asymptote:
            return "ber_asymptote";
        case MetricName::mc_outage:
            return "mc_outage";
        case MetricName::mc_capacity:
            return "mc_capacity";
        case MetricName::mc_ber:
            return "mc_ber";
        case MetricName::mc_mgf:
            return "mc_mgf";
    }
    return "unknown";
}

MetricName parse_metric(std::string_view text)
{
    return parse_enum(text, all_metrics, "metric");
}

bool is_monte_carlo(MetricName m)
{
    return m == MetricName::mc_outage || m == MetricName::mc_capacity || m == MetricName::mc_ber
           || m == MetricName::mc_mgf;
}

std::vector<double> Grid::points() const
{
    std::vector<double> out;
    if (!(step > 0.0))
        return out;
    double const n = std::floor((stop - start) / step + 1e-6);
    for (long i = 0; i <= static_cast<long>(n); ++i)
        out.push_back(start + static_cast<double>(i) * step);
    return out;
}

void validate(SweepSpec const& spec)
{
    auto const fail = [](std::string const& msg) { throw SchemaError(msg); };
    if (!(spec.grid.step > 0.0) || !std::isfinite(spec.grid.step))
        fail("/grid/step: must be positive");
    if (!std::isfinite(spec.grid.start) || !std::isfinite(spec.grid.stop)
        || spec.grid.stop < spec.grid.start)
        fail("/grid: need finite start <= stop");
    if (spec.grid.points().size() > 100000)
        fail("/grid: more than 100000 points");
    if (spec.variable == SweepVariable::zeta && !(spec.grid.start > 0.0))
        fail("/grid/start: zeta must be positive");

    for (std::size_t i = 0; i < spec.metrics.size(); ++i)
    {
        auto const& m = spec.metrics[i];
        std::string const where = "/metrics/" + std::to_string(i);
        bool const threshold_swept = spec.variable == SweepVariable::threshold_db;
        switch (m.name)
        {
            case MetricName::outage:
            case MetricName::mc_outage:
                if (!m.threshold_db && !threshold_swept)
                    fail(where + "/threshold_db: required for " + std::string(to_string(m.name)));
                break;
            case MetricName::pdf:
            case MetricName::cdf:
                if (!m.snr_db && !threshold_swept)
                    fail(where + "/snr_db: required for " + std::string(to_string(m.name)));
                break;
            case MetricName::ber:
            case MetricName::ber_asymptote:
            case MetricName::mc_ber:
                if (!m.scheme)
                    fail(where + "/scheme: required for " + std::string(to_string(m.name)));
                break;
            case MetricName::mgf:
            case MetricName::mc_mgf:
                if (!m.s || !(*m.s > 0.0))
                    fail(where + "/s: positive value required for " + std::string(to_string(m.name)));
                break;
            case MetricName::capacity:
            case MetricName::mc_capacity:
                break;
        }
        if (is_monte_carlo(m.name) && m.samples == 0)
            fail(where + "/samples: must be positive");
    }

    for (std::size_t i = 0; i < spec.scenarios.size(); ++i)
    {
        auto const& sc = spec.scenarios[i];
        std::string const where = "/scenarios/" + std::to_string(i);
        if (!(sc.alpha > 0.0) || !std::isfinite(sc.alpha))
            fail(where + "/alpha: must be positive");
        if (!(sc.beta > 0.0) || !std::isfinite(sc.beta))
            fail(where + "/beta: must be positive");
        if (spec.variable != SweepVariable::zeta && !(sc.zeta > 0.0))
            fail(where + "/zeta: must be positive");
        if (!(sc.mu > 0.0 && sc.mu <= 1.0))
            fail(where + "/mu: must lie in (0, 1]");
        try
        {
            channel::validate(sc.detection);
        }
        catch (DomainError const& e)
        {
            fail(where + "/detection: " + e.what());
        }
        if (spec.variable != SweepVariable::mean_snr_db
            && !(sc.mean_snr_h_db && sc.mean_snr_g_db))
            fail(where + "/mean_snr_db: required unless the mean SNR is swept");
    }
}

std::pair<double, double> split_mean_snr(double db, SnrSplit split)
{
    double const per_hop = split == SnrSplit::product ? db_to_linear(0.5 * db) : db_to_linear(db);
    return {per_hop, per_hop};
}

statistics::SnrDistribution make_distribution(Scenario const& sc, OperatingPoint const& op)
{
    auto params = channel::cascade_params(sc.alpha, sc.beta, op.zeta, sc.detection,
                                          op.mean_snr_h * sc.mean_snr_scale,
                                          op.mean_snr_g * sc.mean_snr_scale);
    return statistics::SnrDistribution(std::move(params), {sc.mu, 0.0});
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    std::array<char, 32> buf{};
    auto const r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), r.ptr);
}

std::vector<MetricCurve> run_sweep(SweepSpec const& spec, unsigned threads)
{
    validate(spec);
    auto const xs = spec.grid.points();

    std::vector<MetricCurve> curves;
    std::vector<std::pair<std::size_t, std::size_t>> owners;  // (scenario, metric)
    for (std::size_t s = 0; s < spec.scenarios.size(); ++s)
    {
        for (std::size_t m = 0; m < spec.metrics.size(); ++m)
        {
            auto c = describe(spec.metrics[m], spec.scenarios[s], spec, s);
            c.x = xs;
            c.y.assign(xs.size(), nan);
            curves.push_back(std::move(c));
            owners.emplace_back(s, m);
        }
    }
    std::vector<std::string> errors(curves.size() * xs.size());

    std::size_t const total = curves.size() * xs.size();
    auto const work = [&](std::size_t task) {
        std::size_t const ci = task / xs.size();
        std::size_t const pi = task % xs.size();
        auto const& sc = spec.scenarios[owners[ci].first];
        auto const& m = spec.metrics[owners[ci].second];
        try
        {
            double const v = evaluate(m, sc, spec, operating_point(sc, spec, xs[pi]), xs[pi]);
            if (!std::isfinite(v))
                throw NumericalError("non-finite value");
            curves[ci].y[pi] = v;
        }
        catch (std::exception const& e)
        {
            errors[task] = e.what();
        }
    };

    unsigned n = threads == 0 ? std::thread::hardware_concurrency() : threads;
    n = static_cast<unsigned>(std::clamp<std::size_t>(n == 0 ? 1 : n, 1, std::max<std::size_t>(total, 1)));
    if (n == 1)
    {
        for (std::size_t t = 0; t < total; ++t)
            work(t);
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n; ++w)
        {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < total; t += n)
                    work(t);
            });
        }
        for (auto& th : pool)
            th.join();
    }

    for (std::size_t ci = 0; ci < curves.size(); ++ci)
    {
        for (std::size_t pi = 0; pi < xs.size(); ++pi)
        {
            auto const& e = errors[ci * xs.size() + pi];
            if (!e.empty())
                curves[ci].diagnostics.push_back("x=" + format_number(xs[pi]) + ": " + e);
        }
    }
    return curves;
}

}  // namespace risfso::cli

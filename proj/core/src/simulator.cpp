#include "risfso/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "risfso/error.hpp"

namespace risfso::simulator
{
namespace
{
std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

// Streaming mean and sum of squared deviations, merged pairwise.
struct Moments
{
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        double const d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(Moments const& o)
    {
        if (o.n == 0)
            return;
        if (n == 0)
        {
            *this = o;
            return;
        }
        double const na = static_cast<double>(n);
        double const nb = static_cast<double>(o.n);
        double const total = na + nb;
        double const d = o.mean - mean;
        mean += d * nb / total;
        m2 += o.m2 + d * d * na * nb / total;
        n += o.n;
    }
};

void require_positive(double x, char const* name)
{
    if (!(x > 0.0) || !std::isfinite(x))
    {
        std::ostringstream msg;
        msg << "simulator: " << name << " must be positive and finite (got " << x << ")";
        throw DomainError(msg.str());
    }
}

void validate(SubChannel const& c)
{
    require_positive(c.alpha, "alpha");
    require_positive(c.beta, "beta");
    require_positive(c.zeta, "zeta");
    require_positive(c.mean_snr, "mean_snr");
    if (!(c.a0 > 0.0 && c.a0 <= 1.0))
        throw DomainError("simulator: A0 must lie in (0, 1]");
}

double subchannel_snr(SubChannel const& c, int a, Rng& rng)
{
    double const z2 = c.zeta * c.zeta;
    double const mean_intensity = c.a0 * z2 / (1.0 + z2);
    double const intensity = sample_pointing(c.zeta, c.a0, rng) * sample_gg(c.alpha, c.beta, rng);
    double const r = intensity / mean_intensity;
    return c.mean_snr * (a == 1 ? r : r * r);
}

// Continued fraction for Gamma(s, x) / Gamma(s), x > s + 1 (modified Lentz).
double gamma_q_fraction(double s, double x)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i)
    {
        double const an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double const delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps)
            break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

// Series for gamma(s, x) / Gamma(s), x <= s + 1.
double gamma_p_series(double s, double x)
{
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int i = 0; i < 10000; ++i)
    {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17)
            break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t state = seed;
    // Mix the stream index in through a second splitmix pass so that
    // neighbouring (seed, stream) pairs do not share state words.
    std::uint64_t mix = stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL;
    state ^= splitmix64(mix);
    for (auto& word : s_)
        word = splitmix64(state);
}

std::uint64_t Rng::next()
{
    std::uint64_t const result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t const t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform()
{
    // 53 random bits, shifted by half an ulp to exclude 0.
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    // Marsaglia polar method.
    double u;
    double v;
    double r2;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    double const f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double sample_gamma(double shape, Rng& rng)
{
    require_positive(shape, "gamma shape");
    if (shape < 1.0)
    {
        // Gamma(k) = Gamma(k + 1) U^{1/k}
        double const u = rng.uniform();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze-accept.
    double const d = shape - 1.0 / 3.0;
    double const c = 1.0 / std::sqrt(9.0 * d);
    while (true)
    {
        double x;
        double v;
        do
        {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double const u = rng.uniform();
        double const x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double sample_gg(double alpha, double beta, Rng& rng)
{
    double const x = sample_gamma(alpha, rng) / alpha;
    double const y = sample_gamma(beta, rng) / beta;
    return x * y;
}

double sample_pointing(double zeta, double a0, Rng& rng)
{
    require_positive(zeta, "zeta");
    return a0 * std::pow(rng.uniform(), 1.0 / (zeta * zeta));
}

void validate(McChannel const& channel)
{
    validate(channel.h);
    validate(channel.g);
    if (channel.a != 1 && channel.a != 2)
        throw DomainError("simulator: detection exponent a must be 1 or 2");
    require_positive(channel.chi, "chi");
    if (!(channel.mu > 0.0 && channel.mu <= 1.0))
        throw DomainError("simulator: mu must lie in (0, 1]");
}

double sample_end_to_end_snr(McChannel const& channel, Rng& rng)
{
    double const gh = subchannel_snr(channel.h, channel.a, rng);
    double const gg = subchannel_snr(channel.g, channel.a, rng);
    return gh * gg * channel.mu * channel.mu;
}

McMetric McMetric::outage(double threshold)
{
    McMetric m;
    m.kind = MetricKind::outage;
    m.threshold = threshold;
    return m;
}

McMetric McMetric::capacity()
{
    McMetric m;
    m.kind = MetricKind::capacity;
    return m;
}

McMetric McMetric::ber(double p, double q)
{
    McMetric m;
    m.kind = MetricKind::ber;
    m.p = p;
    m.q = q;
    return m;
}

McMetric McMetric::mgf(double s)
{
    McMetric m;
    m.kind = MetricKind::mgf;
    m.s = s;
    return m;
}

double gamma_q(double s, double x)
{
    require_positive(s, "incomplete gamma order");
    if (x < 0.0)
        throw DomainError("simulator: incomplete gamma argument must be non-negative");
    if (x == 0.0)
        return 1.0;
    if (x < s + 1.0)
        return 1.0 - gamma_p_series(s, x);
    return gamma_q_fraction(s, x);
}

double metric_sample(McMetric const& metric, McChannel const& channel, double snr)
{
    switch (metric.kind)
    {
        case MetricKind::outage:
            return snr < metric.threshold ? 1.0 : 0.0;
        case MetricKind::capacity:
            return std::log2(1.0 + channel.chi * snr);
        case MetricKind::ber:
            return 0.5 * gamma_q(metric.p, metric.q * snr);
        case MetricKind::mgf:
            return std::exp(-metric.s * snr);
    }
    return 0.0;
}

namespace
{
template<class BatchFn>
void for_each_batch(McConfig const& config, std::uint64_t batches, BatchFn&& fn)
{
    unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    threads = static_cast<unsigned>(
        std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, std::max<std::uint64_t>(batches, 1)));
    if (threads == 1)
    {
        for (std::uint64_t b = 0; b < batches; ++b)
            fn(b);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
    {
        pool.emplace_back([&, t] {
            for (std::uint64_t b = t; b < batches; b += threads)
                fn(b);
        });
    }
    for (auto& th : pool)
        th.join();
}

void validate(McConfig const& config)
{
    if (config.sample_count == 0)
        throw DomainError("simulator: sample_count must be positive");
    if (config.batch_size == 0)
        throw DomainError("simulator: batch_size must be positive");
}

}  // namespace

std::vector<McEstimate> estimate_metrics(std::vector<McMetric> const& metrics,
                                         McChannel const& channel, McConfig const& config)
{
    validate(channel);
    validate(config);
    std::uint64_t const batches = (config.sample_count + config.batch_size - 1) / config.batch_size;
    std::vector<std::vector<Moments>> per_batch(batches, std::vector<Moments>(metrics.size()));

    for_each_batch(config, batches, [&](std::uint64_t b) {
        Rng rng(config.seed, b);
        std::uint64_t const begin = b * config.batch_size;
        std::uint64_t const end = std::min(config.sample_count, begin + config.batch_size);
        auto& acc = per_batch[b];
        for (std::uint64_t i = begin; i < end; ++i)
        {
            double const snr = sample_end_to_end_snr(channel, rng);
            for (std::size_t k = 0; k < metrics.size(); ++k)
                acc[k].add(metric_sample(metrics[k], channel, snr));
        }
    });

    std::vector<McEstimate> out(metrics.size());
    for (std::size_t k = 0; k < metrics.size(); ++k)
    {
        Moments total;
        for (auto const& batch : per_batch)
            total.merge(batch[k]);
        double const n = static_cast<double>(total.n);
        double const variance = total.n > 1 ? total.m2 / (n - 1.0) : 0.0;
        out[k] = {total.mean, std::sqrt(variance / n), total.n};
    }
    return out;
}

McEstimate estimate_metric(McMetric const& metric, McChannel const& channel,
                           McConfig const& config)
{
    return estimate_metrics({metric}, channel, config).front();
}

std::vector<double> sample_snr(McChannel const& channel, McConfig const& config)
{
    validate(channel);
    validate(config);
    std::uint64_t const batches = (config.sample_count + config.batch_size - 1) / config.batch_size;
    std::vector<double> out(config.sample_count);
    for_each_batch(config, batches, [&](std::uint64_t b) {
        Rng rng(config.seed, b);
        std::uint64_t const begin = b * config.batch_size;
        std::uint64_t const end = std::min(config.sample_count, begin + config.batch_size);
        for (std::uint64_t i = begin; i < end; ++i)
            out[i] = sample_end_to_end_snr(channel, rng);
    });
    return out;
}

}  // namespace risfso::simulator

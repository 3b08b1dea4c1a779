#include <doctest.h>

#include <cmath>
#include <string>

#include "reference_values.hpp"
#include "risfso/error.hpp"
#include "risfso/metrics.hpp"
#include "risfso/quadrature.hpp"
#include "risfso/special_functions.hpp"

using namespace risfso;
using statistics::SnrDistribution;
namespace ref = risfso::reference;

namespace
{
double rel_err(double got, double want)
{
    return std::abs(got - want) / std::abs(want);
}

double db(double x)
{
    return std::pow(10.0, x / 10.0);
}

SnrDistribution make(double alpha, double beta, double zeta, int a, double mean_db)
{
    auto const m = a == 1 ? channel::DetectionMode::heterodyne() : channel::DetectionMode::im_dd();
    double const hop = std::sqrt(db(mean_db));
    return SnrDistribution(channel::cascade_params(alpha, beta, zeta, m, hop, hop));
}

struct Pair
{
    double alpha;
    double beta;
};

constexpr Pair table_pairs[] = {
    {10.9537, 2.9833}, {4.9477, 1.2310}, {2.9428, 2.5605}, {12.5331, 4.6787}, {5.6690, 1.4315},
    {2.5012, 2.0807},  {13.2818, 5.7795}, {6.0130, 1.5682}, {2.3664, 1.9221},
};

auto const dbpsk = metrics::modulation(metrics::Scheme::dbpsk);
}  // namespace

TEST_CASE("modulation table and parsing")
{
    auto const c = metrics::modulation(metrics::Scheme::cbfsk);
    CHECK(c.p == 0.5);
    CHECK(c.q == 0.5);
    CHECK(metrics::modulation(metrics::Scheme::nbfsk).p == 1.0);
    CHECK(metrics::modulation(metrics::Scheme::nbfsk).q == 0.5);
    CHECK(metrics::modulation(metrics::Scheme::cbpsk).q == 1.0);
    CHECK(metrics::parse_scheme("dbpsk") == metrics::Scheme::dbpsk);
    CHECK(metrics::parse_scheme("CbFsK") == metrics::Scheme::cbfsk);
    CHECK(metrics::to_string(metrics::Scheme::nbfsk) == "NBFSK");
    CHECK_THROWS_AS(metrics::parse_scheme("qpsk"), SchemaError);
}

TEST_CASE("closed forms match the frozen references")
{
    for (auto const& c : ref::metric_cases)
    {
        std::string const metric = c.metric;
        auto const d = make(c.alpha, c.beta, c.zeta, c.a, c.mean_snr_db);
        double got = 0.0;
        if (metric == "capacity")
            got = metrics::ergodic_capacity(d);
        else if (metric == "ber_dbpsk")
            got = metrics::average_ber(d, dbpsk);
        else if (metric == "ber_cbfsk")
            got = metrics::average_ber(d, metrics::modulation(metrics::Scheme::cbfsk));
        else if (metric == "cdf")
            got = metrics::outage_probability(d, c.extra);
        else
            continue;
        CAPTURE(metric);
        CHECK(rel_err(got, c.value) < 1e-8);
    }
}

TEST_CASE("outage is the cdf at the threshold")
{
    auto const d = make(4.9477, 1.2310, 6.1, 2, 30.0);
    CHECK(metrics::outage_probability(d, 0.0) == 0.0);
    CHECK(metrics::outage_probability(d, 7.0) == d.cdf(7.0));
    CHECK_THROWS_AS(metrics::outage_probability(d, -1.0), DomainError);
}

TEST_CASE("rate thresholds")
{
    CHECK(metrics::threshold_from_rate(1.0) == doctest::Approx(std::exp(1.0)));
    CHECK(metrics::threshold_from_rate(1.0, metrics::RateConvention::shannon)
          == doctest::Approx(std::exp(2.0) - 1.0));
    CHECK(metrics::threshold_from_rate(0.0, metrics::RateConvention::shannon) == 0.0);
}

TEST_CASE("vanishing SNR limits")
{
    auto const d = make(10.9537, 2.9833, 6.1, 1, -80.0);
    CHECK(metrics::ergodic_capacity(d) < 1e-3);
    CHECK(metrics::ergodic_capacity(d) > 0.0);
    for (auto s : metrics::all_schemes)
        CHECK(std::abs(metrics::average_ber(d, metrics::modulation(s)) - 0.5) < 1e-3);
}

TEST_CASE("BER equals the integration-by-parts form")
{
    // q^p / (2 Γ(p)) ∫ e^{-q x} x^{p-1} F(x) dx
    for (int a : {1, 2})
    {
        auto const d = make(4.9477, 1.2310, 1.1, a, 20.0);
        for (auto s : metrics::all_schemes)
        {
            auto const m = metrics::modulation(s);
            auto const f = [&](double u) {
                double const x = std::exp(u);
                return std::exp(-m.q * x + m.p * u) * d.cdf(x);
            };
            double total = 0.0;
            for (double lo = -40.0; lo < 8.0; lo += 4.0)
                total += quadrature::integrate(f, lo, lo + 4.0, {1e-16, 1e-11}).value;
            total *= std::pow(m.q, m.p) / (2.0 * special::gamma(m.p));
            CAPTURE(a);
            CAPTURE(metrics::to_string(s));
            CHECK(rel_err(metrics::average_ber(d, m), total) < 1e-6);
        }
    }
}

TEST_CASE("scheme ordering")
{
    auto const ber = [](SnrDistribution const& d, metrics::Scheme s) {
        return metrics::average_ber(d, metrics::modulation(s));
    };
    using metrics::Scheme;
    for (double mean_db : {5.0, 20.0, 40.0, 60.0})
    {
        for (int a : {1, 2})
        {
            auto const d = make(2.9428, 2.5605, 1.1, a, mean_db);
            CAPTURE(mean_db);
            CAPTURE(a);
            CHECK(ber(d, Scheme::cbpsk) <= ber(d, Scheme::dbpsk));
            CHECK(ber(d, Scheme::cbpsk) <= ber(d, Scheme::cbfsk));
            CHECK(ber(d, Scheme::cbfsk) <= ber(d, Scheme::nbfsk));
            CHECK(ber(d, Scheme::dbpsk) <= ber(d, Scheme::nbfsk));
        }
    }
}

TEST_CASE("DBPSK against CBFSK is decided by the diversity order")
{
    // High-SNR ratio sqrt(pi) Γ(1+G_d) / (Γ(1/2+G_d) 2^{G_d}) crosses 1 at G_d = 1.
    using metrics::Scheme;
    auto const strong = make(13.2818, 5.7795, 6.1, 1, 60.0);  // G_d = 5.78
    CHECK(metrics::average_ber(strong, dbpsk)
          < metrics::average_ber(strong, metrics::modulation(Scheme::cbfsk)));
    auto const weak = make(10.9537, 2.9833, 1.1, 2, 60.0);  // G_d = 0.605
    CHECK(metrics::average_ber(weak, dbpsk)
          > metrics::average_ber(weak, metrics::modulation(Scheme::cbfsk)));
}

TEST_CASE("diversity order")
{
    auto const hd_red = make(10.9537, 2.9833, 1.1, 1, 60.0);
    CHECK(metrics::diversity_order(hd_red.params()) == doctest::Approx(1.21));
    CHECK(metrics::asymptotic_ber(hd_red, dbpsk).diversity_order == doctest::Approx(1.21));

    auto const hd_weak = make(2.9428, 2.5605, 6.1, 1, 60.0);
    CHECK(metrics::diversity_order(hd_weak.params()) == doctest::Approx(2.5605));

    auto const im_red = make(10.9537, 2.9833, 1.1, 2, 60.0);
    CHECK(metrics::diversity_order(im_red.params()) == doctest::Approx(0.605));

    for (auto const& [alpha, beta] : table_pairs)
    {
        for (double zeta : {1.1, 6.1})
        {
            auto const hd = make(alpha, beta, zeta, 1, 30.0);
            auto const im = make(alpha, beta, zeta, 2, 30.0);
            CHECK(metrics::diversity_order(im.params())
                  == doctest::Approx(metrics::diversity_order(hd.params()) / 2.0));
        }
    }
}

TEST_CASE("asymptote approaches the exact BER")
{
    double prev_gap = INFINITY;
    for (double mean_db : {60.0, 70.0, 80.0})
    {
        auto const d = make(10.9537, 2.9833, 6.1, 1, mean_db);
        auto const r = metrics::asymptotic_ber(d, dbpsk);
        double const ratio = r.value / metrics::average_ber(d, dbpsk);
        CAPTURE(mean_db);
        CHECK(ratio > 0.5);
        CHECK(ratio < 2.0);
        CHECK(std::abs(ratio - 1.0) <= prev_gap);
        prev_gap = std::abs(ratio - 1.0);
    }
}

TEST_CASE("asymptote report")
{
    auto const d = make(13.2818, 5.7795, 6.1, 1, 70.0);
    auto const r = metrics::diversity_and_coding_gain(d, dbpsk);
    CHECK(r.diversity_order == doctest::Approx(5.7795));
    CHECK(r.coding_gain_is_local);
    CHECK(r.coding_gain > 0.0);
    CHECK(r.term_weights.size() == 6);
    CHECK(r.exponents.size() == 6);
    CHECK_FALSE(r.degenerate);
    // (G_c mean)^{-G_d} reproduces the dominant terms.
    double const law = std::pow(r.coding_gain * d.mean_snr(), -r.diversity_order);
    CHECK(rel_err(law, r.value) < 0.05);

    // The pre-asymptotic case falls back to the full sum and says so.
    auto const close = make(4.9477, 1.2310, 1.1, 1, 20.0);
    auto const rc = metrics::asymptotic_ber(close, dbpsk);
    CHECK(std::isfinite(rc.coding_gain));
    CHECK_FALSE(rc.warning.empty());
}

TEST_CASE("mean SNR solver")
{
    auto const metric = [](double x_db) { return std::pow(10.0, -x_db / 10.0); };
    CHECK(metrics::solve_mean_snr_db(metric, 1e-3, 0.0, 60.0) == doctest::Approx(30.0).epsilon(1e-5));
    CHECK_THROWS_AS(metrics::solve_mean_snr_db(metric, 1e-9, 0.0, 60.0), NumericalError);

    auto const outage = [](double x_db) {
        return metrics::outage_probability(make(10.9537, 2.9833, 6.1, 1, x_db), db(9.0));
    };
    double const x = metrics::solve_mean_snr_db(outage, 1e-3, 0.0, 80.0);
    CHECK(outage(x) == doctest::Approx(1e-3).epsilon(1e-3));
}

TEST_CASE("worked examples within half a decade")
{
    auto const within_half_decade = [](double value, double target) {
        return std::abs(std::log10(value / target)) <= 0.5;
    };
    double const outage = metrics::outage_probability(make(10.9537, 2.9833, 6.1, 1, 26.0), db(9.0));
    CHECK(within_half_decade(outage, 1e-3));

    double const ber = metrics::average_ber(make(12.5331, 4.6787, 6.1, 2, 35.0),
                                            metrics::modulation(metrics::Scheme::dbpsk));
    CHECK(within_half_decade(ber, 1e-4));
}

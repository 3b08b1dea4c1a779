#include "risfso/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "risfso/error.hpp"
#include "risfso/special_functions.hpp"

namespace risfso::metrics
{
namespace
{
using special::MeijerGSpec;
using statistics::SnrDistribution;

std::vector<double> concat(std::initializer_list<std::vector<double>> parts)
{
    std::vector<double> out;
    for (auto const& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool near_integer(double x, double tol)
{
    return std::abs(x - std::round(x)) <= tol;
}

bool is_nonpositive_integer(double x)
{
    return x < 0.5 && near_integer(x, special::pole_collision_tol);
}

// Offsets (units of the perturbation) splitting Delta_2 entries whose
// spacing is an integer.
std::vector<double> split_offsets(std::vector<double> const& d2)
{
    std::size_t const n = d2.size();
    std::vector<int> cluster(n, -1);
    std::vector<double> offsets(n, 0.0);
    int next = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (cluster[j] >= 0)
            continue;
        std::vector<std::size_t> members{j};
        cluster[j] = next;
        for (std::size_t k = j + 1; k < n; ++k)
        {
            if (cluster[k] < 0 && near_integer(d2[k] - d2[j], special::pole_collision_tol))
            {
                cluster[k] = next;
                members.push_back(k);
            }
        }
        double const size = static_cast<double>(members.size());
        for (std::size_t i = 0; i < members.size(); ++i)
            offsets[members[i]] = 2.0 * static_cast<double>(i) - (size - 1.0);
        ++next;
    }
    return offsets;
}

struct LeadingTerm
{
    double log_abs_weight;  // log|xi_k|
    int sign;               // 0 when the pole is cancelled
    double exponent;
    std::size_t index;
};

// Leading residue of each Delta_2 pole of the BER integrand, with the
// Delta_2 entries shifted by eps * offsets.
std::vector<LeadingTerm> leading_terms(channel::CascadeParams const& params, double p,
                                       std::vector<double> const& offsets, double eps)
{
    auto const& d1 = params.delta1;
    auto const& d2 = params.delta2;
    std::vector<LeadingTerm> out;
    for (std::size_t k = 0; k < d2.size(); ++k)
    {
        LeadingTerm t{0.0, 1, d2[k] + eps * offsets[k], k};
        bool cancelled = false;
        for (double x : d1)
        {
            if (is_nonpositive_integer(x - d2[k]))
                cancelled = true;
        }
        if (cancelled)
        {
            t.sign = 0;
            out.push_back(t);
            continue;
        }
        auto acc = [&](double x, int power) {
            auto const g = special::log_gamma_signed(x);
            t.log_abs_weight += power * g.log_abs;
            t.sign *= g.sign;
        };
        acc(t.exponent + p, 1);
        for (std::size_t j = 0; j < d2.size(); ++j)
        {
            if (j != k)
                acc((d2[j] - d2[k]) + eps * (offsets[j] - offsets[k]), 1);
        }
        for (double x : d1)
            acc(x - t.exponent, -1);
        t.log_abs_weight -= std::log(t.exponent);
        out.push_back(t);
    }
    return out;
}

// (M0 / 2 Gamma(p)) sum_k xi_k (q mean / Q0)^{-exponent_k}, restricted to
// the terms accepted by `keep`.
template<class Keep>
double leading_sum(std::vector<LeadingTerm> const& terms, double log_prefactor,
                   double log_ratio, Keep keep)
{
    double sum = 0.0;
    for (auto const& t : terms)
    {
        if (t.sign == 0 || !keep(t))
            continue;
        sum += t.sign * std::exp(log_prefactor + t.log_abs_weight - t.exponent * log_ratio);
    }
    return sum;
}

}  // namespace

ModulationScheme modulation(Scheme name)
{
    switch (name)
    {
        case Scheme::cbfsk:
            return {name, 0.5, 0.5};
        case Scheme::nbfsk:
            return {name, 1.0, 0.5};
        case Scheme::cbpsk:
            return {name, 0.5, 1.0};
        case Scheme::dbpsk:
            return {name, 1.0, 1.0};
    }
    throw DomainError("unknown modulation scheme");
}

std::string_view to_string(Scheme name)
{
    switch (name)
    {
        case Scheme::cbfsk:
            return "CBFSK";
        case Scheme::nbfsk:
            return "NBFSK";
        case Scheme::cbpsk:
            return "CBPSK";
        case Scheme::dbpsk:
            return "DBPSK";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name)
{
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (Scheme s : all_schemes)
    {
        if (to_string(s) == upper)
            return s;
    }
    throw SchemaError("unknown modulation scheme '" + std::string(name)
                      + "' (expected CBFSK, NBFSK, CBPSK or DBPSK)");
}

double outage_probability(SnrDistribution const& dist, double threshold)
{
    if (!(threshold >= 0.0))
        throw DomainError("outage threshold must be non-negative");
    return dist.cdf(threshold);
}

double threshold_from_rate(double rate, RateConvention convention)
{
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw DomainError("rate must be non-negative and finite");
    return convention == RateConvention::shannon ? std::expm1(2.0 * rate)
                                                 : std::exp(2.0 * rate - 1.0);
}

special::EvalResult ergodic_capacity_eval(SnrDistribution const& dist)
{
    auto const& p = dist.params();
    MeijerGSpec spec{6 * p.a + 2, 1, concat({{0.0, 1.0}, p.delta1}),
                     concat({p.delta2, {0.0, 0.0}}), p.Q0 / (p.chi * dist.mean_snr())};
    auto r = special::meijer_g(spec);
    double const scale = p.M0 / std::numbers::ln2;
    r.value *= scale;
    r.abs_error_estimate *= scale;
    return r;
}

double ergodic_capacity(SnrDistribution const& dist)
{
    return ergodic_capacity_eval(dist).value;
}

special::EvalResult average_ber_eval(SnrDistribution const& dist, ModulationScheme const& scheme)
{
    auto const& p = dist.params();
    MeijerGSpec spec{6 * p.a, 2, concat({{1.0 - scheme.p, 1.0}, p.delta1}),
                     concat({p.delta2, {0.0}}), p.Q0 / (scheme.q * dist.mean_snr())};
    auto r = special::meijer_g(spec);
    double const scale = p.M0 / (2.0 * special::gamma(scheme.p));
    r.value *= scale;
    r.abs_error_estimate *= scale;
    return r;
}

double average_ber(SnrDistribution const& dist, ModulationScheme const& scheme)
{
    return average_ber_eval(dist, scheme).value;
}

double diversity_order(channel::CascadeParams const& params)
{
    return *std::min_element(params.delta2.begin(), params.delta2.end());
}

AsymptoteReport asymptotic_ber(SnrDistribution const& dist, ModulationScheme const& scheme)
{
    auto const& params = dist.params();
    auto const offsets = split_offsets(params.delta2);
    double const eps = special::pole_perturbation;
    auto const up = leading_terms(params, scheme.p, offsets, eps);
    auto const down = leading_terms(params, scheme.p, offsets, -eps);

    double const log_prefactor = params.log_M0 - std::log(2.0) - special::log_gamma(scheme.p);
    double const log_ratio = std::log(scheme.q * dist.mean_snr() / params.Q0);
    auto const all = [](LeadingTerm const&) { return true; };

    AsymptoteReport out;
    out.value = 0.5
                * (leading_sum(up, log_prefactor, log_ratio, all)
                   + leading_sum(down, log_prefactor, log_ratio, all));
    for (auto const& t : up)
    {
        out.term_weights.push_back(t.sign * std::exp(t.log_abs_weight));
        out.exponents.push_back(t.exponent);
    }

    double const gd = diversity_order(params);
    out.diversity_order = gd;
    auto const at_minimum = [&](LeadingTerm const& t) {
        return std::abs(params.delta2[t.index] - gd) <= special::pole_collision_tol;
    };
    auto const dominant = std::count_if(up.begin(), up.end(), at_minimum);
    if (dominant == 1)
    {
        // (G_c mean)^{-G_d} = (M0 / 2 Gamma(p)) xi_k (q mean / Q0)^{-G_d}
        auto const t = std::find_if(up.begin(), up.end(), at_minimum);
        double const log_weight = t->log_abs_weight;
        out.coding_gain = scheme.q / params.Q0 * std::exp(-(log_prefactor + log_weight) / gd);
    }
    else
    {
        double const p_dom = 0.5
                             * (leading_sum(up, log_prefactor, log_ratio, at_minimum)
                                + leading_sum(down, log_prefactor, log_ratio, at_minimum));
        out.coding_gain_is_local = true;
        if (p_dom > 0.0)
        {
            out.coding_gain = std::pow(p_dom, -1.0 / gd) / dist.mean_snr();
        }
        else if (out.value > 0.0)
        {
            // A nearby exponent still outweighs the minimal ones here.
            out.coding_gain = std::pow(out.value, -1.0 / gd) / dist.mean_snr();
            out.warning = "terms at the minimal exponent are not yet dominant at this mean SNR; "
                          "coding gain taken from the full asymptotic sum";
        }
        else
        {
            out.coding_gain = std::numeric_limits<double>::quiet_NaN();
            out.warning = "asymptotic sum is not positive at this mean SNR; coding gain undefined";
        }
    }

    auto const& d2 = params.delta2;
    for (std::size_t j = 0; j < d2.size(); ++j)
    {
        for (std::size_t k = j + 1; k < d2.size(); ++k)
        {
            double const gap = std::abs(d2[j] - d2[k]);
            if (gap > special::pole_collision_tol && gap < 1e-6)
                out.degenerate = true;
        }
    }
    if (out.degenerate)
    {
        out.warning += out.warning.empty() ? "" : "; ";
        out.warning += "two exponents are closer than 1e-6 without coinciding; "
                      "the leading terms are ill-conditioned";
    }
    return out;
}

AsymptoteReport diversity_and_coding_gain(SnrDistribution const& dist,
                                          ModulationScheme const& scheme)
{
    return asymptotic_ber(dist, scheme);
}

}  // namespace risfso::metrics

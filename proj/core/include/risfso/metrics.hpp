#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "risfso/statistics.hpp"

namespace risfso::metrics
{
enum class Scheme
{
    cbfsk,
    nbfsk,
    cbpsk,
    dbpsk,
};

/// Binary scheme whose conditional error probability is
/// Gamma(p, q snr) / (2 Gamma(p)).
struct ModulationScheme
{
    Scheme name = Scheme::dbpsk;
    double p = 1.0;
    double q = 1.0;
};

ModulationScheme modulation(Scheme name);
std::string_view to_string(Scheme name);
// Case-insensitive; throws SchemaError for unknown names.
Scheme parse_scheme(std::string_view name);
inline constexpr Scheme all_schemes[] = {Scheme::cbfsk, Scheme::nbfsk, Scheme::cbpsk,
                                         Scheme::dbpsk};

double outage_probability(statistics::SnrDistribution const& dist, double threshold);

enum class RateConvention
{
    // exp(2R - 1), the default
    exponent_shifted,
    // exp(2R) - 1; opt-in
    shannon,
};

double threshold_from_rate(double rate, RateConvention convention = RateConvention::exponent_shifted);

// E[log2(1 + chi snr)]
double ergodic_capacity(statistics::SnrDistribution const& dist);
double average_ber(statistics::SnrDistribution const& dist, ModulationScheme const& scheme);

special::EvalResult ergodic_capacity_eval(statistics::SnrDistribution const& dist);
special::EvalResult average_ber_eval(statistics::SnrDistribution const& dist,
                                     ModulationScheme const& scheme);

/// High-SNR behaviour of the average BER, P ~ (G_c snr)^{-G_d}.
struct AsymptoteReport
{
    double diversity_order = 0.0;
    double coding_gain = 0.0;
    // True when the smallest exponent is repeated: the leading term then
    // carries a log factor and G_c is evaluated at the distribution's mean SNR.
    bool coding_gain_is_local = false;
    // Leading residue weight and exponent per Delta_2 entry (after splitting
    // repeated entries by +/- pole_perturbation).
    std::vector<double> term_weights;
    std::vector<double> exponents;
    // Sum of all leading terms at the distribution's mean SNR.
    double value = 0.0;
    // Set when two exponents are closer than 1e-6 without being equal.
    bool degenerate = false;
    std::string warning;
};

AsymptoteReport asymptotic_ber(statistics::SnrDistribution const& dist,
                               ModulationScheme const& scheme);
AsymptoteReport diversity_and_coding_gain(statistics::SnrDistribution const& dist,
                                          ModulationScheme const& scheme);

// min(Delta_2)
double diversity_order(channel::CascadeParams const& params);

// Smallest mean SNR (dB) with metric(mean) <= target, by bisection in dB on
// [lo_db, hi_db]. `metric` must be decreasing in the mean SNR. Throws
// NumericalError when the bracket does not contain the target.
template<class F>
double solve_mean_snr_db(F&& metric, double target, double lo_db, double hi_db,
                         double tol_db = 1e-4);

}  // namespace risfso::metrics

#include "risfso/detail/solve.hpp"

#include "risfso/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "risfso/error.hpp"
#include "risfso/special_functions.hpp"

namespace risfso::channel
{
namespace
{
using std::numbers::pi;

void require_positive(double value, char const* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
    {
        std::ostringstream msg;
        msg << name << " must be positive and finite (got " << value << ")";
        throw DomainError(msg.str());
    }
}

// [exp(x) - 1]^{-1}, written to keep precision for small x.
double inverse_expm1(double x)
{
    if (x == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / std::expm1(x);
}

}  // namespace

DetectionMode DetectionMode::heterodyne()
{
    return {1, 1.0};
}

DetectionMode DetectionMode::im_dd()
{
    return {2, std::numbers::e / (2.0 * pi)};
}

char const* to_string(DetectionMode mode)
{
    return mode.a == 1 ? "heterodyne" : "im_dd";
}

void validate(DetectionMode const& mode)
{
    if (!(mode == DetectionMode::heterodyne() || mode == DetectionMode::im_dd()))
    {
        std::ostringstream msg;
        msg << "detection mode must be heterodyne (a=1, chi=1) or IM/DD "
               "(a=2, chi=e/2pi); got a="
            << mode.a << " chi=" << mode.chi;
        throw DomainError(msg.str());
    }
}

void validate(LinkScenario const& s)
{
    require_positive(s.wavelength, "wavelength");
    require_positive(s.distance, "distance");
    require_positive(s.aperture_diameter, "aperture_diameter");
    require_positive(s.receiver_radius, "receiver_radius");
    require_positive(s.beam_waist, "beam_waist");
    if (!(s.cn2 >= 1e-17 && s.cn2 <= 1e-9))
    {
        std::ostringstream msg;
        msg << "cn2 must lie in [1e-17, 1e-9] m^(-2/3) (got " << s.cn2 << ")";
        throw DomainError(msg.str());
    }
    if (!(s.attenuation >= 0.0) || !std::isfinite(s.attenuation))
    {
        throw DomainError("attenuation must be non-negative and finite");
    }
    validate(s.detection);
}

double rytov_variance(LinkScenario const& s)
{
    validate(s);
    double const eta = 2.0 * pi / s.wavelength;
    return 0.492 * s.cn2 * std::pow(eta, 7.0 / 6.0) * std::pow(s.distance, 11.0 / 6.0);
}

double aperture_parameter(LinkScenario const& s)
{
    validate(s);
    double const eta = 2.0 * pi / s.wavelength;
    return std::sqrt(eta * s.aperture_diameter * s.aperture_diameter / (4.0 * s.distance));
}

TurbulenceState alpha_beta(double rytov, double d)
{
    if (!(rytov >= 0.0) || !std::isfinite(rytov))
        throw DomainError("Rytov variance must be non-negative and finite");
    if (!(d >= 0.0) || !std::isfinite(d))
        throw DomainError("aperture parameter d must be non-negative and finite");

    // sigma^{12/5} with sigma^2 the Rytov variance
    double const s125 = std::pow(rytov, 6.0 / 5.0);
    double const d2 = d * d;
    double const x_alpha
        = 0.49 * rytov / std::pow(1.0 + 0.18 * d2 + 0.56 * s125, 7.0 / 6.0);
    double const x_beta = 0.51 * rytov * std::pow(1.0 + 0.69 * s125, -5.0 / 6.0)
                          / std::pow(1.0 + 0.9 * d2 + 0.62 * s125, 5.0 / 6.0);

    TurbulenceState out;
    out.rytov = rytov;
    out.d = d;
    out.alpha = inverse_expm1(x_alpha);
    out.beta = inverse_expm1(x_beta);
    out.saturated = !(out.alpha <= saturation_limit && out.beta <= saturation_limit);
    return out;
}

TurbulenceState alpha_beta(LinkScenario const& scenario)
{
    return alpha_beta(rytov_variance(scenario), aperture_parameter(scenario));
}

PointingState pointing_state(LinkScenario const& s, double zeta)
{
    validate(s);
    require_positive(zeta, "zeta");
    PointingState out;
    out.v = s.receiver_radius * std::sqrt(pi) / (std::sqrt(2.0) * s.beam_waist);
    double const e = special::erf(out.v);
    out.a0 = e * e;
    out.zeta = zeta;
    return out;
}

double path_loss(LinkScenario const& s)
{
    validate(s);
    return std::exp(-s.attenuation * s.distance);
}

double pointing_pdf(double intensity, PointingState const& p)
{
    require_positive(p.zeta, "zeta");
    if (!(p.a0 > 0.0 && p.a0 <= 1.0))
        throw DomainError("A0 must lie in (0, 1]");
    if (intensity < 0.0 || intensity > p.a0)
        return 0.0;
    double const z2 = p.zeta * p.zeta;
    if (intensity == 0.0)
        return z2 < 1.0 ? std::numeric_limits<double>::infinity() : (z2 == 1.0 ? 1.0 / p.a0 : 0.0);
    return z2 / p.a0 * std::pow(intensity / p.a0, z2 - 1.0);
}

double gamma_gamma_pdf(double intensity, double alpha, double beta)
{
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    if (intensity <= 0.0)
        return 0.0;
    double const ab = alpha * beta;
    double const log_prefactor = std::log(2.0) + 0.5 * (alpha + beta) * std::log(ab)
                                 - special::log_gamma(alpha) - special::log_gamma(beta)
                                 + (0.5 * (alpha + beta) - 1.0) * std::log(intensity);
    double const k = special::bessel_k(alpha - beta, 2.0 * std::sqrt(ab * intensity));
    if (k == 0.0)
        return 0.0;
    return std::exp(log_prefactor + std::log(k));
}

std::vector<double> multiplication_block(double x, int a)
{
    std::vector<double> out;
    for (int j = 0; j < a; ++j)
        out.push_back((x + j) / a);
    return out;
}

CascadeParams cascade_params(double alpha, double beta, double zeta, DetectionMode mode,
                             double mean_snr_h, double mean_snr_g)
{
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    require_positive(zeta, "zeta");
    require_positive(mean_snr_h, "mean_snr_h");
    require_positive(mean_snr_g, "mean_snr_g");
    validate(mode);

    int const a = mode.a;
    double const z2 = zeta * zeta;

    CascadeParams out;
    out.alpha = alpha;
    out.beta = beta;
    out.zeta = zeta;
    out.a = a;
    out.chi = mode.chi;

    double const log_M = std::log(z2) - std::log(static_cast<double>(a))
                         - special::log_gamma(alpha) - special::log_gamma(beta);
    out.M = std::exp(log_M);
    out.Q = z2 * alpha * beta / (1.0 + z2);

    // Gauss multiplication of the doubled gamma products. The (2 pi) power
    // uses (a - 1): at a = 1 the constant must reduce to M^2.
    out.log_M0 = 2.0 * log_M + 2.0 * (alpha + beta - 1.0) * std::log(static_cast<double>(a))
                 - 2.0 * (a - 1) * std::log(2.0 * pi);
    out.M0 = std::exp(out.log_M0);
    // Each hop contributes Q^a / a^{2a} after the multiplication formula is
    // applied to its three gamma factors.
    out.Q0 = std::pow(out.Q, 2 * a) / std::pow(static_cast<double>(a), 4 * a);

    for (int rep = 0; rep < 2; ++rep)
    {
        auto const block = multiplication_block(z2 + 1.0, a);
        out.delta1.insert(out.delta1.end(), block.begin(), block.end());
    }
    for (int rep = 0; rep < 2; ++rep)
    {
        for (double x : {z2, alpha, beta})
        {
            auto const block = multiplication_block(x, a);
            out.delta2.insert(out.delta2.end(), block.begin(), block.end());
        }
    }

    out.mean_snr_h = mean_snr_h;
    out.mean_snr_g = mean_snr_g;
    out.mean_snr = mean_snr_h * mean_snr_g;
    return out;
}

CascadeParams cascade_params(TurbulenceState const& turbulence, PointingState const& pointing,
                             DetectionMode mode, double mean_snr_h, double mean_snr_g)
{
    if (turbulence.saturated)
    {
        throw DomainError("cascade_params: turbulence state is saturated "
                          "(alpha or beta beyond the supported range)");
    }
    return cascade_params(turbulence.alpha, turbulence.beta, pointing.zeta, mode, mean_snr_h,
                          mean_snr_g);
}

}  // namespace risfso::channel

#pragma once

#include <vector>

namespace risfso::channel
{
/// Detection technique: the SNR scales with the received intensity to the
/// power `a`, and `chi` is the capacity scaling factor.
struct DetectionMode
{
    int a = 1;
    double chi = 1.0;

    static DetectionMode heterodyne();
    static DetectionMode im_dd();
    bool operator==(DetectionMode const&) const = default;
};

char const* to_string(DetectionMode mode);

/// Physical description of one sub-channel (SI units).
struct LinkScenario
{
    double wavelength = 700e-9;
    double distance = 1000.0;
    double aperture_diameter = 1e-3;
    double cn2 = 5e-14;  // m^(-2/3)
    double receiver_radius = 0.05;
    double beam_waist = 0.05;
    double attenuation = 0.0;  // 1/m
    DetectionMode detection = DetectionMode::heterodyne();
};

// Throws DomainError when a length is not positive, C_n^2 lies outside
// [1e-17, 1e-9], the attenuation is negative or the detection mode is not
// one of the two supported pairs.
void validate(LinkScenario const& scenario);
void validate(DetectionMode const& mode);

struct TurbulenceState
{
    double rytov = 0.0;
    double d = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    // Weak-turbulence limit: alpha or beta exceeds saturation_limit (or is
    // infinite because the Rytov variance vanished).
    bool saturated = false;
};

inline constexpr double saturation_limit = 1e6;

struct PointingState
{
    double v = 0.0;
    double a0 = 0.0;
    double zeta = 0.0;
};

// 0.492 C_n^2 eta^{7/6} L^{11/6} with eta = 2 pi / lambda.
double rytov_variance(LinkScenario const& scenario);

// d = sqrt(eta D^2 / (4 L))
double aperture_parameter(LinkScenario const& scenario);

TurbulenceState alpha_beta(LinkScenario const& scenario);
TurbulenceState alpha_beta(double rytov, double d);

// zeta is a free scenario-level input; A0 = erf(v)^2 with
// v = r sqrt(pi) / (sqrt(2) w_z).
PointingState pointing_state(LinkScenario const& scenario, double zeta);

// Beer-Lambert: exp(-delta L)
double path_loss(LinkScenario const& scenario);

// zeta^2 / A0^{zeta^2} I^{zeta^2 - 1} on [0, A0], zero elsewhere.
double pointing_pdf(double intensity, PointingState const& pointing);

// Unit-mean Gamma-Gamma density.
double gamma_gamma_pdf(double intensity, double alpha, double beta);

/// Parameters shared by every closed form of the cascaded SNR.
struct CascadeParams
{
    double alpha = 0.0;
    double beta = 0.0;
    double zeta = 0.0;
    int a = 1;
    double chi = 1.0;

    double M = 0.0;
    double Q = 0.0;
    double M0 = 0.0;
    double log_M0 = 0.0;
    double Q0 = 0.0;
    std::vector<double> delta1;  // 2a entries
    std::vector<double> delta2;  // 6a entries

    double mean_snr = 0.0;  // product of the per-hop values
    double mean_snr_h = 0.0;
    double mean_snr_g = 0.0;
};

// Both hops share (alpha, beta, zeta); the per-hop mean SNRs already include
// path loss.
CascadeParams cascade_params(TurbulenceState const& turbulence,
                             PointingState const& pointing, DetectionMode mode,
                             double mean_snr_h, double mean_snr_g);
CascadeParams cascade_params(double alpha, double beta, double zeta,
                             DetectionMode mode, double mean_snr_h,
                             double mean_snr_g);

// x/a, (x+1)/a, ..., (x+a-1)/a
std::vector<double> multiplication_block(double x, int a);

}  // namespace risfso::channel

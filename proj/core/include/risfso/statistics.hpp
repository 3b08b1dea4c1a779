#pragma once

#include "risfso/channel.hpp"
#include "risfso/meijer_g.hpp"

namespace risfso::statistics
{
/// A single reflecting element. The phase is assumed perfectly compensated,
/// so only the amplitude matters: it scales the mean SNR by mu^2.
struct RisElement
{
    double mu = 1.0;
    double theta = 0.0;
};

/// Ratios gamma / mean SNR outside [lower, upper] are answered from the
/// limiting values (CDF 0 or 1, PDF 0) instead of the evaluator.
inline constexpr double guard_lower = 1e-30;
inline constexpr double guard_upper = 1e30;

/// End-to-end SNR of the reflected cascade. Immutable; every member function
/// is safe to call concurrently.
class SnrDistribution
{
  public:
    explicit SnrDistribution(channel::CascadeParams params, RisElement ris = {});

    channel::CascadeParams const& params() const { return params_; }
    RisElement const& ris() const { return ris_; }
    // Product of the per-hop means scaled by mu^2.
    double mean_snr() const { return mean_snr_; }
    int a() const { return params_.a; }

    double pdf(double snr) const;
    double cdf(double snr) const;
    double mgf(double s) const;

    special::EvalResult pdf_eval(double snr) const;
    special::EvalResult cdf_eval(double snr) const;
    special::EvalResult mgf_eval(double s) const;

    // G^{6,0}_{2,6} at Q^2 (snr / mean)^{1/a}
    special::MeijerGSpec pdf_spec(double snr) const;
    // G^{6a,1}_{2a+1,6a+1} at Q0 snr / mean
    special::MeijerGSpec cdf_spec(double snr) const;
    // G^{6a,2}_{2a+2,6a+1} at Q0 / (mean s)
    special::MeijerGSpec mgf_spec(double s) const;

  private:
    channel::CascadeParams params_;
    RisElement ris_;
    double mean_snr_;
    special::MeijerGSpec pdf_template_;
    special::MeijerGSpec cdf_template_;
    special::MeijerGSpec mgf_template_;
};

// Density of one hop's SNR, (M / snr) G^{3,0}_{1,3}[Q (snr/mean)^{1/a}].
double subchannel_pdf(double snr, double mean_snr, double alpha, double beta,
                      double zeta, int a);

// Reference paths that integrate numerically instead of using the closed
// forms; slow, intended for validation.

// Product-density integral over the two hops' SNR densities.
double pdf_product_direct(SnrDistribution const& dist, double snr);
// The same integral after substituting X = t^{1/a}, with the second factor
// written as the reflected G^{0,3}_{3,1}.
double pdf_hd_direct(SnrDistribution const& dist, double snr);
// Integral of the closed-form density from 0 to snr.
double cdf_direct(SnrDistribution const& dist, double snr);
// s * integral of exp(-s x) F(x) over (0, inf).
double mgf_direct(SnrDistribution const& dist, double s);

}  // namespace risfso::statistics

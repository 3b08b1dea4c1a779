#include "risfso/statistics.hpp"

#include <cmath>
#include <sstream>

#include "risfso/error.hpp"
#include "risfso/quadrature.hpp"
#include "risfso/special_functions.hpp"

namespace risfso::statistics
{
namespace
{
using special::MeijerGSpec;

constexpr double direct_rel_tol = 1e-10;

void require_positive(double value, char const* what)
{
    if (!(value > 0.0) || !std::isfinite(value))
    {
        std::ostringstream msg;
        msg << what << " must be positive and finite (got " << value << ")";
        throw DomainError(msg.str());
    }
}

std::vector<double> concat(std::initializer_list<std::vector<double>> parts)
{
    std::vector<double> out;
    for (auto const& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Integral over the whole real line, split at `center`.
template<class F>
quadrature::Result integrate_line(F&& f, double center, double width)
{
    quadrature::Options opt;
    opt.rel_tol = direct_rel_tol;
    auto const up = quadrature::integrate_expanding(f, center, width, 1.0, opt);
    auto const down = quadrature::integrate_expanding(f, center, width, -1.0, opt);
    return {up.value + down.value, up.abs_error + down.abs_error,
            up.evaluations + down.evaluations, up.converged && down.converged};
}

void require_converged(quadrature::Result const& r, char const* what)
{
    if (!r.converged || !std::isfinite(r.value))
    {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge (value " << r.value << ", error "
            << r.abs_error << ")";
        throw NumericalError(msg.str());
    }
}

MeijerGSpec subchannel_spec(double alpha, double beta, double zeta, double argument)
{
    double const z2 = zeta * zeta;
    return {3, 0, {z2 + 1.0}, {z2, alpha, beta}, argument};
}

}  // namespace

SnrDistribution::SnrDistribution(channel::CascadeParams params, RisElement ris)
    : params_(std::move(params)), ris_(ris)
{
    if (!(ris_.mu > 0.0 && ris_.mu <= 1.0))
        throw DomainError("RIS amplitude coefficient mu must lie in (0, 1]");
    require_positive(params_.mean_snr, "mean SNR");
    if ((params_.a != 1 && params_.a != 2)
        || params_.delta1.size() != static_cast<std::size_t>(2 * params_.a)
        || params_.delta2.size() != static_cast<std::size_t>(6 * params_.a))
    {
        throw DomainError("SnrDistribution: inconsistent cascade parameters");
    }
    mean_snr_ = params_.mean_snr * ris_.mu * ris_.mu;

    double const z2 = params_.zeta * params_.zeta;
    double const al = params_.alpha;
    double const be = params_.beta;
    int const a = params_.a;
    pdf_template_ = {6, 0, {z2 + 1.0, z2 + 1.0}, {z2, al, be, z2, al, be}, 1.0};
    cdf_template_ = {6 * a, 1, concat({{1.0}, params_.delta1}),
                     concat({params_.delta2, {0.0}}), 1.0};
    mgf_template_ = {6 * a, 2, concat({{0.0, 1.0}, params_.delta1}),
                     concat({params_.delta2, {0.0}}), 1.0};
}

MeijerGSpec SnrDistribution::pdf_spec(double snr) const
{
    auto spec = pdf_template_;
    spec.argument = params_.Q * params_.Q * std::pow(snr / mean_snr_, 1.0 / params_.a);
    return spec;
}

MeijerGSpec SnrDistribution::cdf_spec(double snr) const
{
    auto spec = cdf_template_;
    spec.argument = params_.Q0 * snr / mean_snr_;
    return spec;
}

MeijerGSpec SnrDistribution::mgf_spec(double s) const
{
    auto spec = mgf_template_;
    spec.argument = params_.Q0 / (mean_snr_ * s);
    return spec;
}

special::EvalResult SnrDistribution::pdf_eval(double snr) const
{
    require_positive(snr, "pdf: snr");
    double const x = snr / mean_snr_;
    if (x > guard_upper)
        return {0.0, 0.0, special::EvalMethod::identity_shortcut, 0.0, "above guard"};
    auto r = special::meijer_g(pdf_spec(snr));
    double const scale = params_.a * params_.M * params_.M / snr;
    r.value *= scale;
    r.abs_error_estimate *= scale;
    return r;
}

special::EvalResult SnrDistribution::cdf_eval(double snr) const
{
    if (!(snr >= 0.0))
        throw DomainError("cdf: snr must be non-negative");
    double const x = snr / mean_snr_;
    if (x < guard_lower)
        return {0.0, 0.0, special::EvalMethod::identity_shortcut, 0.0, "below guard"};
    if (x > guard_upper)
        return {1.0, 0.0, special::EvalMethod::identity_shortcut, 0.0, "above guard"};
    auto r = special::meijer_g(cdf_spec(snr));
    r.value *= params_.M0;
    r.abs_error_estimate *= params_.M0;
    return r;
}

special::EvalResult SnrDistribution::mgf_eval(double s) const
{
    require_positive(s, "mgf: s");
    if (mean_snr_ * s < guard_lower)
        return {1.0, 0.0, special::EvalMethod::identity_shortcut, 0.0, "below guard"};
    auto r = special::meijer_g(mgf_spec(s));
    r.value *= params_.M0;
    r.abs_error_estimate *= params_.M0;
    return r;
}

double SnrDistribution::pdf(double snr) const
{
    return pdf_eval(snr).value;
}

double SnrDistribution::cdf(double snr) const
{
    return cdf_eval(snr).value;
}

double SnrDistribution::mgf(double s) const
{
    return mgf_eval(s).value;
}

double subchannel_pdf(double snr, double mean_snr, double alpha, double beta, double zeta,
                      int a)
{
    require_positive(snr, "subchannel_pdf: snr");
    require_positive(mean_snr, "subchannel_pdf: mean_snr");
    double const z2 = zeta * zeta;
    double const M = z2 / (a * special::gamma(alpha) * special::gamma(beta));
    double const Q = z2 * alpha * beta / (1.0 + z2);
    double const arg = Q * std::pow(snr / mean_snr, 1.0 / a);
    return M / snr * special::meijer_g(subchannel_spec(alpha, beta, zeta, arg)).value;
}

double pdf_product_direct(SnrDistribution const& dist, double snr)
{
    require_positive(snr, "pdf_product_direct: snr");
    auto const& p = dist.params();
    // The RIS amplitude is absorbed into the first hop.
    double const mh = p.mean_snr_h * dist.ris().mu * dist.ris().mu;
    double const mg = p.mean_snr_g;
    // t = exp(u): f_h(t) f_g(snr/t) dt/t = f_h f_g du
    auto const integrand = [&](double u) {
        double const t = std::exp(u);
        double const fh = subchannel_pdf(t, mh, p.alpha, p.beta, p.zeta, p.a);
        if (fh == 0.0)
            return 0.0;
        return fh * subchannel_pdf(snr / t, mg, p.alpha, p.beta, p.zeta, p.a);
    };
    double const center = 0.5 * std::log(snr * mh / mg);
    auto const r = integrate_line(integrand, center, 1.0);
    require_converged(r, "pdf_product_direct");
    return r.value;
}

double pdf_hd_direct(SnrDistribution const& dist, double snr)
{
    require_positive(snr, "pdf_hd_direct: snr");
    auto const& p = dist.params();
    double const mh = p.mean_snr_h * dist.ris().mu * dist.ris().mu;
    double const mg = p.mean_snr_g;
    int const a = p.a;
    double const z2 = p.zeta * p.zeta;
    double const M = z2 / (a * special::gamma(p.alpha) * special::gamma(p.beta));
    double const first_scale = p.Q / std::pow(mh, 1.0 / a);
    double const second_scale = std::pow(mg / snr, 1.0 / a) / p.Q;
    MeijerGSpec reflected{0, 3, {1.0 - z2, 1.0 - p.alpha, 1.0 - p.beta}, {-z2}, 1.0};
    // X = exp(u): (1/X) dX = du
    auto const integrand = [&](double u) {
        double const X = std::exp(u);
        double const g1
            = special::meijer_g(subchannel_spec(p.alpha, p.beta, p.zeta, first_scale * X)).value;
        if (g1 == 0.0)
            return 0.0;
        auto spec = reflected;
        spec.argument = second_scale * X;
        return g1 * special::meijer_g(spec).value;
    };
    // Both factors are of order one where Q X ~ mh^{1/a} and X ~ Q (snr/mg)^{1/a}.
    double const center = 0.5 * (std::log(1.0 / first_scale) + std::log(1.0 / second_scale));
    auto const r = integrate_line(integrand, center, 1.0);
    require_converged(r, "pdf_hd_direct");
    return a * M * M / snr * r.value;
}

double cdf_direct(SnrDistribution const& dist, double snr)
{
    if (!(snr >= 0.0))
        throw DomainError("cdf_direct: snr must be non-negative");
    if (snr == 0.0)
        return 0.0;
    // F(snr) = integral over x < snr of x f(x) d(ln x)
    auto const integrand = [&](double u) {
        double const x = std::exp(u);
        return x * dist.pdf(x);
    };
    quadrature::Options opt;
    opt.rel_tol = direct_rel_tol;
    opt.abs_tol = 1e-15;
    double const top = std::log(snr);
    double const peak = std::log(dist.mean_snr());
    quadrature::Result r;
    if (top <= peak)
    {
        r = quadrature::integrate_expanding(integrand, top, 1.0, -1.0, opt);
    }
    else
    {
        auto const body = quadrature::integrate(integrand, peak, top, opt);
        auto const tail = quadrature::integrate_expanding(integrand, peak, 1.0, -1.0, opt);
        r = {body.value + tail.value, body.abs_error + tail.abs_error,
             body.evaluations + tail.evaluations, body.converged && tail.converged};
    }
    require_converged(r, "cdf_direct");
    return r.value;
}

double mgf_direct(SnrDistribution const& dist, double s)
{
    require_positive(s, "mgf_direct: s");
    // s * integral of exp(-s x) F(x) x d(ln x)
    auto const integrand = [&](double u) {
        double const x = std::exp(u);
        double const w = s * x;
        if (w > 745.0)
            return 0.0;
        return w * std::exp(-w) * dist.cdf(x);
    };
    double const center = std::min(-std::log(s), std::log(dist.mean_snr()));
    auto const r = integrate_line(integrand, center, 2.0);
    require_converged(r, "mgf_direct");
    return r.value;
}

}  // namespace risfso::statistics

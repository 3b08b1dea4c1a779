#include "risfso/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "risfso/error.hpp"

namespace risfso::special
{
namespace
{
using std::numbers::pi;

// Godfrey's coefficients for the Lanczos approximation, g = 607/128, n = 15.
constexpr double lanczos_g = 607.0 / 128.0;
constexpr std::array<double, 15> lanczos_coef = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5,
};

bool is_nonpositive_integer(complex z)
{
    return z.imag() == 0.0 && z.real() <= 0.0
           && z.real() == std::floor(z.real());
}

// log sin(w) without overflow for large |Im w|.
complex log_sin(complex w)
{
    constexpr complex i{0.0, 1.0};
    double const y = w.imag();
    if (std::abs(y) < 20.0)
    {
        return std::log(std::sin(w));
    }
    if (y > 0.0)
    {
        return -i * w + std::log((std::exp(2.0 * i * w) - 1.0) / (2.0 * i));
    }
    return i * w + std::log((1.0 - std::exp(-2.0 * i * w)) / (2.0 * i));
}

complex log_gamma_lanczos(complex z)
{
    complex const zm1 = z - 1.0;
    complex const t = zm1 + lanczos_g + 0.5;
    complex series = lanczos_coef[0];
    for (std::size_t k = 1; k < lanczos_coef.size(); ++k)
    {
        series += lanczos_coef[k] / (zm1 + static_cast<double>(k));
    }
    return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t
           + std::log(series);
}

// Coefficients of 1/Γ(z) = Σ c_k z^k (k = 1..26).
constexpr std::array<double, 26> rgamma_coef = {
    1.0000000000000000,  0.5772156649015329,  -0.6558780715202538,
    -0.0420026350340952, 0.1665386113822915,  -0.0421977345555443,
    -0.0096219715278770, 0.0072189432466630,  -0.0011651675918591,
    -0.0002152416741149, 0.0001280502823882,  -0.0000201348547807,
    -0.0000012504934821, 0.0000011330272320,  -0.0000002056338417,
    0.0000000061160950,  0.0000000050020075,  -0.0000000011812746,
    0.0000000001043427,  0.0000000000077823,  -0.0000000000036968,
    0.0000000000005100,  -0.0000000000000206, -0.0000000000000054,
    0.0000000000000014,  0.0000000000000001,
};

// Temme's auxiliary functions for |mu| <= 1/2:
//   gam1 = (1/Γ(1-mu) - 1/Γ(1+mu)) / (2 mu),  gam2 = (1/Γ(1-mu) + 1/Γ(1+mu)) / 2
struct TemmeGammas
{
    double gam1;
    double gam2;
    double gampl;  // 1/Γ(1+mu)
    double gammi;  // 1/Γ(1-mu)
};

TemmeGammas temme_gammas(double mu)
{
    // 1/Γ(1+x) = Σ_{k>=1} c_k x^{k-1}
    double gam1 = 0.0;
    double gam2 = 0.0;
    for (std::size_t k = rgamma_coef.size(); k-- > 0;)
    {
        // rgamma_coef[k] multiplies mu^k in 1/Γ(1+mu).
        if (k % 2 == 1)
        {
            gam1 = gam1 * mu * mu - rgamma_coef[k];
        }
        else
        {
            gam2 = gam2 * mu * mu + rgamma_coef[k];
        }
    }
    return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

}  // namespace

complex log_gamma(complex z)
{
    if (is_nonpositive_integer(z))
    {
        throw DomainError("log_gamma: pole at z = "
                          + std::to_string(z.real()));
    }
    if (z.real() < 0.5)
    {
        return std::log(pi) - log_sin(pi * z) - log_gamma_lanczos(1.0 - z);
    }
    return log_gamma_lanczos(z);
}

complex gamma_complex(complex z)
{
    return std::exp(log_gamma(z));
}

double gamma(double x)
{
    if (x <= 0.0 && x == std::floor(x))
    {
        throw DomainError("gamma: pole at x = " + std::to_string(x));
    }
    return std::tgamma(x);
}

SignedLogGamma log_gamma_signed(double x)
{
    double const log_abs = log_gamma(complex{x, 0.0}).real();
    if (x > 0.0)
    {
        return {log_abs, 1};
    }
    auto const fl = static_cast<long long>(std::floor(x));
    return {log_abs, (fl % 2 == 0) ? 1 : -1};
}

double log_gamma(double x)
{
    return log_gamma_signed(x).log_abs;
}

double bessel_k(double order, double x)
{
    if (!(x > 0.0))
    {
        throw DomainError("bessel_k: x must be positive, got "
                          + std::to_string(x));
    }
    constexpr double eps = 1e-16;
    constexpr int max_iter = 100000;

    double const nu = std::abs(order);
    // Both branches need |mu| <= 1/2; the order is restored by recurrence.
    int const nl = static_cast<int>(nu + 0.5);
    double const mu = nu - nl;
    double const mu2 = mu * mu;
    double const xi = 1.0 / x;
    double const xi2 = 2.0 * xi;

    double kmu = 0.0;
    double kmu1 = 0.0;
    if (x < 2.0)
    {
        // Temme's series.
        double const x2 = 0.5 * x;
        double const pimu = pi * mu;
        double const fact = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        double const fact2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
        auto const tg = temme_gammas(mu);
        double ff = fact * (tg.gam1 * std::cosh(e) + tg.gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / tg.gampl;
        double q = 0.5 / (e * tg.gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i <= max_iter; ++i)
        {
            ff = (i * ff + p + q) / (i * i - mu2);
            c *= d / i;
            p /= (i - mu);
            q /= (i + mu);
            double const del = c * ff;
            sum += del;
            double const del1 = c * (p - i * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * eps)
            {
                break;
            }
        }
        if (i > max_iter)
        {
            throw NumericalError("bessel_k: Temme series did not converge");
        }
        kmu = sum;
        kmu1 = sum1 * xi2;
    }
    else
    {
        // Steed's continued fraction CF2 (Thompson-Barnett).
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        double const a1 = 0.25 - mu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        int i = 2;
        for (; i <= max_iter; ++i)
        {
            a -= 2 * (i - 1);
            c = -a * c / i;
            double const qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            double const dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < eps)
            {
                break;
            }
        }
        if (i > max_iter)
        {
            throw NumericalError("bessel_k: continued fraction did not converge");
        }
        h = a1 * h;
        kmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
        kmu1 = kmu * (mu + x + 0.5 - h) * xi;
    }

    // Upward recurrence in the order is stable for K.
    for (int i = 1; i <= nl; ++i)
    {
        double const next = (mu + i) * xi2 * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = next;
    }
    return kmu;
}

double erf(double x)
{
    return std::erf(x);
}

double erfc(double x)
{
    return std::erfc(x);
}

}  // namespace risfso::special

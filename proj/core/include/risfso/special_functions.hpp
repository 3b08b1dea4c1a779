#pragma once

#include <complex>

namespace risfso::special
{
using complex = std::complex<double>;

// Principal-sheet-agnostic log Gamma: the real part is log|Γ(z)|, the
// imaginary part is arg Γ(z) modulo 2π. Throws DomainError at the poles.
complex log_gamma(complex z);

// Γ(z) for complex z. Throws DomainError at z = 0, -1, -2, ...
complex gamma_complex(complex z);

// Real Γ(x) and log|Γ(x)|.
double gamma(double x);
double log_gamma(double x);

struct SignedLogGamma
{
    double log_abs;
    int sign;
};

// log|Γ(x)| together with the sign of Γ(x); thread-safe replacement for
// lgamma + signgam.
SignedLogGamma log_gamma_signed(double x);

// Modified Bessel function of the second kind K_ν(x), x > 0.
// K_{-ν} = K_ν, so any real order is accepted.
double bessel_k(double order, double x);

double erf(double x);
double erfc(double x);

}  // namespace risfso::special

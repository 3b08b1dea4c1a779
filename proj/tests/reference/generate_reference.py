#!/usr/bin/env python3
"""Freeze high-precision reference values for the C++ test suites.

Run from this directory:  python3 generate_reference.py > reference_values.hpp
Requires mpmath. Everything is evaluated at 40 significant digits and
written with 17, so the frozen values are correctly rounded doubles.
"""

import mpmath as mp

mp.mp.dps = 40


def fmt(x):
    return mp.nstr(mp.mpf(x), 17)


def block(x, a):
    return [(mp.mpf(x) + k) / a for k in range(a)]


class Cascade:
    def __init__(self, alpha, beta, zeta, a):
        self.alpha, self.beta, self.zeta = mp.mpf(alpha), mp.mpf(beta), mp.mpf(zeta)
        self.a = a
        z2 = self.zeta ** 2
        self.M = z2 / (a * mp.gamma(self.alpha) * mp.gamma(self.beta))
        self.Q = z2 * self.alpha * self.beta / (1 + z2)
        self.M0 = self.M ** 2 * mp.mpf(a) ** (2 * (self.alpha + self.beta - 1)) / (2 * mp.pi) ** (2 * (a - 1))
        self.Q0 = self.Q ** (2 * a) / mp.mpf(a) ** (4 * a)
        self.delta1 = block(z2 + 1, a) * 2
        self.delta2 = (block(z2, a) + block(self.alpha, a) + block(self.beta, a)) * 2
        self.chi = 1 if a == 1 else mp.e / (2 * mp.pi)


def meijer(m, n, a, b, z):
    an, ap = a[:n], a[n:]
    bm, bq = b[:m], b[m:]
    return mp.meijerg([an, ap], [bm, bq], z)


cases = []  # (name, m, n, a, b, z, value)
metrics = []  # (name, alpha, beta, zeta, a, mean_snr, extra, value)


def add_case(name, m, n, a, b, z):
    a = [mp.mpf(x) for x in a]
    b = [mp.mpf(x) for x in b]
    z = mp.mpf(z)
    cases.append((name, m, n, a, b, z, meijer(m, n, a, b, z)))


# Identity instances
add_case("exp", 1, 0, [], [0], 1)
add_case("log1p", 1, 2, [1, 1], [1, 0], 1)
add_case("log1p_small", 1, 2, [1, 1], [1, 0], mp.mpf("0.25"))
add_case("bessel_half", 2, 0, [], [mp.mpf("0.25"), mp.mpf("-0.25")], 1)
add_case("bessel_2_3", 2, 0, [], [mp.mpf("1.15"), mp.mpf("-1.15")], 5)

RED = ("10.9537", "2.9833")
MOD = ("4.9477", "1.2310")
WEAK = ("2.9428", "2.5605")
BLUE = ("12.5331", "4.6787")


def pdf_spec(c, x):
    """G^{6,0}_{2,6} at Q^2 x^{1/a}, x = snr / mean."""
    z2 = c.zeta ** 2
    return (6, 0, [z2 + 1, z2 + 1], [z2, c.alpha, c.beta, z2, c.alpha, c.beta],
            c.Q ** 2 * mp.mpf(x) ** (mp.mpf(1) / c.a))


def cdf_spec(c, x):
    return (6 * c.a, 1, [1] + c.delta1, c.delta2 + [0], c.Q0 * mp.mpf(x))


for (ab, zeta, x) in [(BLUE, "6.1", "1e-3"), (BLUE, "6.1", "1"), (RED, "1.1", "0.3"), (WEAK, "6.1", "10")]:
    c = Cascade(ab[0], ab[1], zeta, 1)
    m, n, a, b, z = pdf_spec(c, x)
    add_case(f"pdf_G_{ab[0]}_{zeta}_{x}", m, n, a, b, z)

for (ab, zeta, a_mode, x) in [(RED, "6.1", 1, "1e-2"), (RED, "6.1", 1, "1"), (MOD, "1.1", 1, "0.5"),
                              (RED, "1.1", 2, "0.1"), (WEAK, "6.1", 2, "3")]:
    c = Cascade(ab[0], ab[1], zeta, a_mode)
    m, n, a, b, z = cdf_spec(c, x)
    add_case(f"cdf_G_{ab[0]}_{zeta}_a{a_mode}_{x}", m, n, a, b, z)


def db(x):
    return mp.mpf(10) ** (mp.mpf(x) / 10)


def add_metric(name, ab, zeta, a_mode, mean_db, extra, fn):
    c = Cascade(ab[0], ab[1], zeta, a_mode)
    mean = db(mean_db)
    metrics.append((name, ab[0], ab[1], zeta, a_mode, mean_db, extra, fn(c, mean, mp.mpf(extra))))


def cdf_value(c, mean, snr):
    m, n, a, b, z = cdf_spec(c, snr / mean)
    return c.M0 * meijer(m, n, a, b, z)


def mgf_value(c, mean, s):
    return c.M0 * meijer(6 * c.a, 2, [0, 1] + c.delta1, c.delta2 + [0], c.Q0 / (mean * s))


def capacity_value(c, mean, _):
    return c.M0 / mp.log(2) * meijer(6 * c.a + 2, 1, [0, 1] + c.delta1, c.delta2 + [0, 0],
                                     c.Q0 / (c.chi * mean))


def ber_value(p, q):
    def f(c, mean, _):
        return c.M0 / (2 * mp.gamma(p)) * meijer(6 * c.a, 2, [1 - p, 1] + c.delta1, c.delta2 + [0],
                                                 c.Q0 / (q * mean))
    return f


add_metric("cdf", RED, "6.1", 1, "20", "10", cdf_value)
add_metric("cdf", MOD, "1.1", 2, "30", "100", cdf_value)
add_metric("mgf", RED, "6.1", 1, "20", "0.1", mgf_value)
add_metric("mgf", WEAK, "1.1", 2, "10", "1", mgf_value)
add_metric("capacity", RED, "6.1", 1, "35", "0", capacity_value)
add_metric("capacity", BLUE, "1.1", 2, "30", "0", capacity_value)
add_metric("ber_dbpsk", RED, "6.1", 1, "30", "0", ber_value(mp.mpf(1), mp.mpf(1)))
add_metric("ber_cbfsk", MOD, "6.1", 2, "40", "0", ber_value(mp.mpf("0.5"), mp.mpf("0.5")))

# Scalar oracles
scalars = []


def scalar(name, value):
    scalars.append((name, value))


scalar("gamma_3_7", mp.gamma(mp.mpf("3.7")))
scalar("gamma_0_5", mp.gamma(mp.mpf("0.5")))
scalar("gamma_37_2", mp.gamma(mp.mpf("37.2")))
scalar("gamma_neg_2_5", mp.gamma(mp.mpf("-2.5")))
scalar("bessel_k_2_3", mp.besselk(2, 3))
scalar("bessel_k_0_0_5", mp.besselk(0, mp.mpf("0.5")))
scalar("bessel_k_2_3_5", mp.besselk(mp.mpf("2.3"), 5))
scalar("bessel_k_12_5_40", mp.besselk(mp.mpf("12.5"), 40))
scalar("erf_1", mp.erf(1))
scalar("erf_0_3", mp.erf(mp.mpf("0.3")))
scalar("erf_2_5", mp.erf(mp.mpf("2.5")))
scalar("erfc_4", mp.erfc(4))

complex_points = [mp.mpc("2.5", "1.5"), mp.mpc("-1.3", "0.7"), mp.mpc("0.2", "-3"), mp.mpc("10", "20")]
gamma_complex = [(z, mp.gamma(z)) for z in complex_points]

# Link-level formulas
lam, L, D, cn2 = mp.mpf("700e-9"), mp.mpf(1000), mp.mpf("1e-3"), mp.mpf("5e-14")
eta = 2 * mp.pi / lam
rytov = mp.mpf("0.492") * cn2 * eta ** (mp.mpf(7) / 6) * L ** (mp.mpf(11) / 6)
d = mp.sqrt(eta * D ** 2 / (4 * L))


def alpha_beta(s2, d):
    s125 = s2 ** (mp.mpf(6) / 5)
    xa = mp.mpf("0.49") * s2 / (1 + mp.mpf("0.18") * d ** 2 + mp.mpf("0.56") * s125) ** (mp.mpf(7) / 6)
    xb = (mp.mpf("0.51") * s2 * (1 + mp.mpf("0.69") * s125) ** (-mp.mpf(5) / 6)
          / (1 + mp.mpf("0.9") * d ** 2 + mp.mpf("0.62") * s125) ** (mp.mpf(5) / 6))
    return 1 / mp.expm1(xa), 1 / mp.expm1(xb)


al, be = alpha_beta(rytov, d)
a1, b1 = alpha_beta(mp.mpf(1), mp.mpf(0))
scalar("rytov_700nm_1km_5e14", rytov)
scalar("aperture_d_700nm_1km_1mm", d)
scalar("alpha_700nm_1km_5e14", al)
scalar("beta_700nm_1km_5e14", be)
scalar("alpha_rytov1_d0", a1)
scalar("beta_rytov1_d0", b1)
a5, b5 = alpha_beta(mp.mpf("2.5"), mp.mpf("0.7"))
scalar("alpha_rytov2_5_d0_7", a5)
scalar("beta_rytov2_5_d0_7", b5)
scalar("a0_r_equals_w", mp.erf(mp.sqrt(mp.pi / 2)) ** 2)
c = Cascade(RED[0], RED[1], "6.1", 1)
scalar("Q_red_6_1", c.Q)
scalar("M_red_6_1", c.M)
c2 = Cascade(RED[0], RED[1], "1.1", 2)
scalar("M0_red_1_1_a2", c2.M0)
scalar("Q0_red_1_1_a2", c2.Q0)


def cxx_list(xs):
    return "{" + ", ".join(fmt(x) for x in xs) + "}"


out = []
out.append("// Generated by generate_reference.py; do not edit.")
out.append("#pragma once\n")
out.append("#include <array>\n#include <complex>\n#include <vector>\n")
out.append("namespace risfso::reference\n{")
for name, v in scalars:
    out.append(f"inline constexpr double {name} = {fmt(v)};")
out.append("")
out.append("struct ComplexGamma\n{\n    std::complex<double> z;\n    std::complex<double> value;\n};\n")
out.append("inline std::vector<ComplexGamma> const gamma_complex_cases = {")
for z, g in gamma_complex:
    out.append(f"    {{{{{fmt(z.real)}, {fmt(z.imag)}}}, {{{fmt(g.real)}, {fmt(g.imag)}}}}},")
out.append("};\n")
out.append("struct MeijerCase\n{\n    char const* name;\n    int m;\n    int n;\n"
           "    std::vector<double> a;\n    std::vector<double> b;\n    double z;\n    double value;\n};\n")
out.append("inline std::vector<MeijerCase> const meijer_cases = {")
for name, m, n, a, b, z, v in cases:
    out.append(f"    {{\"{name}\", {m}, {n}, {cxx_list(a)}, {cxx_list(b)}, {fmt(z)}, {fmt(v)}}},")
out.append("};\n")
out.append("// Closed-form metrics assembled independently from (alpha, beta, zeta, a).\n"
           "// `extra` is the SNR argument (cdf, linear), s (mgf), or unused.")
out.append("struct MetricCase\n{\n    char const* metric;\n    double alpha;\n    double beta;\n    double zeta;\n"
           "    int a;\n    double mean_snr_db;\n    double extra;\n    double value;\n};\n")
out.append("inline std::vector<MetricCase> const metric_cases = {")
for name, al_, be_, ze, a_mode, mdb, extra, v in metrics:
    out.append(f"    {{\"{name}\", {al_}, {be_}, {ze}, {a_mode}, {mdb}, {extra}, {fmt(v)}}},")
out.append("};\n")
out.append("}  // namespace risfso::reference")
print("\n".join(out))

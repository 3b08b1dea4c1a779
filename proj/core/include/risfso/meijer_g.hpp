#pragma once

#include <string>
#include <vector>

namespace risfso::special
{
/// Orders and parameters of one Meijer-G evaluation
///
///   G^{m,n}_{p,q}[ z | a_1..a_p ; b_1..b_q ]
///     = 1/(2πi) ∫_L  Π_{j≤m} Γ(b_j+s) Π_{j≤n} Γ(1-a_j-s)
///                   / ( Π_{j>m} Γ(1-b_j-s) Π_{j>n} Γ(a_j+s) ) z^{-s} ds.
///
/// Only positive real arguments are supported.
struct MeijerGSpec
{
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<double> b;
    double argument = 1.0;

    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }
};

enum class EvalMethod
{
    contour,
    residue_series,
    identity_shortcut,
};

char const* to_string(EvalMethod method);

struct EvalResult
{
    double value = 0.0;
    double abs_error_estimate = 0.0;
    EvalMethod method = EvalMethod::contour;
    // Size of the parameter shift applied to separate colliding poles
    // (0 when none was needed).
    double perturbation = 0.0;
    std::string diagnostic;
};

struct MeijerGOptions
{
    double rel_tol = 1e-11;
    bool allow_shortcuts = true;
    // Terms per pole family used when falling back to the residue series.
    int fallback_terms = 400;
};

// Spacing below which two pole families are treated as colliding, and the
// shift applied to split them.
inline constexpr double pole_collision_tol = 1e-9;
inline constexpr double pole_perturbation = 1e-6;

// Throws DomainError when the orders, list lengths or argument are invalid.
void validate(MeijerGSpec const& spec);

// G^{m,n}_{p,q}[z | A; B] = G^{n,m}_{q,p}[1/z | 1-B; 1-A]
MeijerGSpec reflect(MeijerGSpec const& spec);

// Mellin-Barnes integral along a vertical line through the real saddle of
// the integrand. Falls back to the residue series when no vertical line
// separates the pole families.
EvalResult meijer_g(MeijerGSpec const& spec, MeijerGOptions const& options = {});

// Sum over the left poles (those of the m gamma-numerator factors), `terms`
// residues per pole. Colliding poles are split by ±pole_perturbation and the
// two mirrored splittings are averaged. Throws NumericalError outside the
// convergence region (p > q, or p == q with z > 1).
EvalResult meijer_g_residue_series(MeijerGSpec const& spec, int terms);

}  // namespace risfso::special

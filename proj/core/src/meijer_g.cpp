#include "risfso/meijer_g.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "risfso/error.hpp"
#include "risfso/quadrature.hpp"
#include "risfso/special_functions.hpp"

namespace risfso::special
{
namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();

bool near_integer(double x, double tol = pole_collision_tol)
{
    return std::abs(x - std::round(x)) <= tol;
}

bool is_nonpositive_integer(double x, double tol)
{
    return x <= tol && near_integer(x, tol);
}

// Neumaier's compensated summation.
class CompensatedSum
{
  public:
    void add(double x)
    {
        double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
        {
            comp_ += (sum_ - t) + x;
        }
        else
        {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

//---------------------------------------------------------------------------//
// Mellin-Barnes integrand  Φ(s) z^{-s}
//---------------------------------------------------------------------------//

// Γ(offset + slope * s)
struct GammaFactor
{
    double offset;
    double slope;
};

// (offset + slope * s)^power
struct LinearFactor
{
    double offset;
    double slope;
    int power;
};

class MellinIntegrand
{
  public:
    explicit MellinIntegrand(MeijerGSpec const& spec)
    {
        for (int j = 0; j < spec.q(); ++j)
        {
            if (j < spec.m)
                num_.push_back({spec.b[j], 1.0});
            else
                den_.push_back({1.0 - spec.b[j], -1.0});
        }
        for (int j = 0; j < spec.p(); ++j)
        {
            if (j < spec.n)
                num_.push_back({1.0 - spec.a[j], -1.0});
            else
                den_.push_back({spec.a[j], 1.0});
        }
        cancel_gamma_ratios();
    }

    std::complex<double> log_value(std::complex<double> s) const
    {
        std::complex<double> acc = 0.0;
        for (auto const& f : num_)
            acc += log_gamma(f.offset + f.slope * s);
        for (auto const& f : den_)
            acc -= log_gamma(f.offset + f.slope * s);
        for (auto const& f : lin_)
            acc += static_cast<double>(f.power) * std::log(f.offset + f.slope * s);
        return acc;
    }

    // True when s sits on (or next to) a zero of Φ on the real axis.
    bool near_zero(double s) const
    {
        for (auto const& f : den_)
        {
            double const x = f.offset + f.slope * s;
            if (x < 0.5 && near_integer(x, 0.02))
                return true;
        }
        for (auto const& f : lin_)
        {
            if (f.power > 0 && std::abs(f.offset + f.slope * s) < 0.02)
                return true;
        }
        return false;
    }

  private:
    // Γ(x)/Γ(x+N) and Γ(x+N)/Γ(x) with small integer N reduce to
    // rational factors, which are cheaper and exact.
    void cancel_gamma_ratios()
    {
        constexpr int max_shift = 12;
        for (std::size_t i = 0; i < den_.size();)
        {
            bool cancelled = false;
            for (std::size_t k = 0; k < num_.size(); ++k)
            {
                if (num_[k].slope != den_[i].slope)
                    continue;
                double const shift = den_[i].offset - num_[k].offset;
                double const tol = 1e-12 * (1.0 + std::abs(den_[i].offset));
                if (std::abs(shift - std::round(shift)) > tol
                    || std::abs(shift) > max_shift)
                    continue;
                int const steps = static_cast<int>(std::round(shift));
                double const slope = den_[i].slope;
                if (steps >= 0)
                {
                    for (int j = 0; j < steps; ++j)
                        lin_.push_back({num_[k].offset + j, slope, -1});
                }
                else
                {
                    for (int j = 0; j < -steps; ++j)
                        lin_.push_back({den_[i].offset + j, slope, 1});
                }
                num_.erase(num_.begin() + static_cast<std::ptrdiff_t>(k));
                den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(i));
                cancelled = true;
                break;
            }
            if (!cancelled)
                ++i;
        }
    }

    std::vector<GammaFactor> num_;
    std::vector<GammaFactor> den_;
    std::vector<LinearFactor> lin_;
};

struct Strip
{
    double left;   // rightmost pole of the Γ(b_j + s) family
    double right;  // leftmost pole of the Γ(1 - a_j - s) family
};

Strip separating_strip(MeijerGSpec const& spec)
{
    Strip strip{-inf, inf};
    for (int j = 0; j < spec.m; ++j)
        strip.left = std::max(strip.left, -spec.b[j]);
    for (int j = 0; j < spec.n; ++j)
        strip.right = std::min(strip.right, 1.0 - spec.a[j]);
    return strip;
}

// Real part of log(Φ(c) z^{-c}); +inf next to poles and zeros.
double real_exponent(MellinIntegrand const& f, double c, double log_z)
{
    if (f.near_zero(c))
        return inf;
    try
    {
        double const v = f.log_value({c, 0.0}).real() - c * log_z;
        return std::isfinite(v) ? v : inf;
    }
    catch (DomainError const&)
    {
        return inf;
    }
}

// Locates the minimum of the real exponent over the open strip: the
// vertical line through it crosses the saddle, so the integrand has no
// large cancelling lobes.
double choose_abscissa(MellinIntegrand const& f, Strip strip, double log_z,
                       double span)
{
    auto const h = [&](double c) { return real_exponent(f, c, log_z); };

    for (int attempt = 0; attempt < 12; ++attempt, span *= 2.0)
    {
        double lo = strip.left;
        double hi = strip.right;
        if (!std::isfinite(lo) && !std::isfinite(hi))
        {
            lo = -span;
            hi = span;
        }
        else if (!std::isfinite(lo))
        {
            lo = hi - span;
        }
        else if (!std::isfinite(hi))
        {
            hi = lo + span;
        }

        constexpr int grid = 121;
        double const step = (hi - lo) / grid;
        int best = -1;
        double best_value = inf;
        for (int i = 0; i < grid; ++i)
        {
            double const c = lo + (i + 0.5) * step;
            double const v = h(c);
            if (v < best_value)
            {
                best_value = v;
                best = i;
            }
        }
        if (best < 0)
        {
            throw NumericalError("meijer_g: integrand has no finite point on the "
                                 "real axis of the separating strip");
        }
        bool const at_open_top = !std::isfinite(strip.right) && best == grid - 1;
        bool const at_open_bottom = !std::isfinite(strip.left) && best == 0;
        if ((at_open_top || at_open_bottom) && attempt < 11)
        {
            continue;
        }

        // Golden-section refinement between the neighbouring grid points.
        double a = lo + std::max(0, best - 1) * step + (best == 0 ? 1e-9 * step : 0.5 * step);
        double b = lo + std::min(grid - 1, best + 1) * step
                   + (best == grid - 1 ? step * (1.0 - 1e-9) : 0.5 * step);
        constexpr double ratio = 0.6180339887498949;
        double x1 = b - ratio * (b - a);
        double x2 = a + ratio * (b - a);
        double f1 = h(x1);
        double f2 = h(x2);
        for (int it = 0; it < 60 && (b - a) > 1e-7 * (1.0 + std::abs(a)); ++it)
        {
            if (f1 < f2)
            {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = h(x1);
            }
            else
            {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = h(x2);
            }
        }
        double const c = f1 < f2 ? x1 : x2;
        double const v = std::min(f1, f2);
        return v <= best_value ? c : lo + (best + 0.5) * step;
    }
    throw NumericalError("meijer_g: could not place the contour");
}

EvalResult contour_integral(MeijerGSpec const& spec, Strip strip,
                            MeijerGOptions const& options)
{
    MellinIntegrand const f(spec);
    double const log_z = std::log(spec.argument);

    double max_param = 0.0;
    for (double x : spec.a)
        max_param = std::max(max_param, std::abs(x));
    for (double x : spec.b)
        max_param = std::max(max_param, std::abs(x));
    double const span = 10.0 + std::abs(log_z) + max_param;

    double const c = choose_abscissa(f, strip, log_z, span);
    double const h0 = real_exponent(f, c, log_z);
    if (!std::isfinite(h0))
    {
        throw NumericalError("meijer_g: contour abscissa landed on a singularity");
    }

    // The integrand never exceeds exp(h0) by much on a saddle line, so a
    // deeply negative h0 means the value underflows.
    if (h0 < -760.0)
    {
        EvalResult out;
        out.method = EvalMethod::contour;
        out.diagnostic = "contour: value below the double range";
        return out;
    }

    // Width of the saddle from the curvature of the real exponent.
    double dist = inf;
    if (std::isfinite(strip.left))
        dist = std::min(dist, c - strip.left);
    if (std::isfinite(strip.right))
        dist = std::min(dist, strip.right - c);
    double const fd = std::min(1e-2, 0.1 * dist);
    double const curvature
        = (real_exponent(f, c + fd, log_z) - 2.0 * h0 + real_exponent(f, c - fd, log_z))
          / (fd * fd);
    double const sigma = (std::isfinite(curvature) && curvature > 0.0)
                             ? 1.0 / std::sqrt(curvature)
                             : 1.0;
    double const first_width = std::clamp(3.0 * sigma, 0.05, 10.0);

    bool overflow = false;
    auto const integrand = [&](double t) {
        std::complex<double> const s{c, t};
        std::complex<double> const e = f.log_value(s) - s * log_z - h0;
        if (e.real() > 700.0)
        {
            overflow = true;
            return 0.0;
        }
        return std::exp(e.real()) * std::cos(e.imag());
    };

    quadrature::Options qopt;
    qopt.rel_tol = options.rel_tol;
    qopt.max_intervals = 2000;
    auto const r = quadrature::integrate_expanding(integrand, 0.0, first_width, 1.0, qopt);
    if (overflow)
    {
        throw NumericalError("meijer_g: contour integrand overflowed away from the "
                             "real axis");
    }

    double const scale = std::exp(h0) / std::numbers::pi;
    EvalResult out;
    out.method = EvalMethod::contour;
    out.value = scale * r.value;
    out.abs_error_estimate
        = scale * r.abs_error + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
    if (!std::isfinite(out.value))
    {
        throw NumericalError("meijer_g: non-finite contour integral");
    }
    std::ostringstream diag;
    diag << "contour Re(s)=" << c << " evaluations=" << r.evaluations;
    if (!r.converged)
        diag << " (tolerance not reached)";
    out.diagnostic = diag.str();
    return out;
}

//---------------------------------------------------------------------------//
// Residue series
//---------------------------------------------------------------------------//

// Wynn's epsilon algorithm on a sequence of partial sums; returns the last
// accelerated estimate and the change from the previous one.
std::pair<double, double> wynn_epsilon(std::vector<double> const& sums)
{
    std::size_t const n = sums.size();
    if (n < 3)
        return {sums.back(), inf};
    std::vector<double> prev(n, 0.0);
    std::vector<double> curr(sums);
    double best = sums.back();
    double best_change = std::abs(sums[n - 1] - sums[n - 2]);
    for (std::size_t col = 1; col < n; ++col)
    {
        std::vector<double> next(n - col);
        bool ok = true;
        for (std::size_t i = 0; i + col < n; ++i)
        {
            double const diff = curr[i + 1] - curr[i];
            if (diff == 0.0 || !std::isfinite(diff))
            {
                ok = false;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        if (!ok)
            break;
        prev = std::move(curr);
        curr = std::move(next);
        if (col % 2 == 0 && curr.size() >= 2)
        {
            double const change = std::abs(curr.back() - curr[curr.size() - 2]);
            if (change < best_change)
            {
                best = curr.back();
                best_change = change;
            }
        }
    }
    return {best, best_change};
}

struct SeriesValue
{
    double value;
    double abs_error;
};

// Parameters are spec.a + eps * a_offset and spec.b + eps * b_offset.
// Differences between parameters are formed from the unshifted values
// first so that the small splitting survives rounding.
SeriesValue residue_sum(MeijerGSpec const& spec, std::vector<double> const& a_off,
                        std::vector<double> const& b_off, double eps, int terms)
{
    double const log_z = std::log(spec.argument);
    int const m = spec.m;
    int const n = spec.n;
    int const p = spec.p();
    int const q = spec.q();

    std::vector<double> partial;
    partial.reserve(static_cast<std::size_t>(terms));
    CompensatedSum sum;
    double max_term = 0.0;
    double rounding = 0.0;
    double last_level = 0.0;
    double prev_level = 0.0;
    for (int k = 0; k < terms; ++k)
    {
        CompensatedSum level;
        double const log_fact = log_gamma(static_cast<double>(k) + 1.0);
        for (int pole = 0; pole < m; ++pole)
        {
            double const bk = spec.b[pole] + eps * b_off[pole];
            auto const db = [&](int j) {
                return (spec.b[j] - spec.b[pole]) + eps * (b_off[j] - b_off[pole]);
            };
            auto const da = [&](int j) {
                return (spec.a[j] - spec.b[pole]) + eps * (a_off[j] - b_off[pole]);
            };
            double log_abs = -log_fact + (bk + k) * log_z;
            int sign = (k % 2 == 0) ? 1 : -1;
            bool zero = false;
            // Sum of magnitudes entering log_abs; exp() turns its rounding
            // error into a relative error of the term.
            double log_scale = std::abs(log_abs) + log_fact;
            auto const mul = [&](double x) {
                auto const g = log_gamma_signed(x);
                log_abs += g.log_abs;
                log_scale += std::abs(g.log_abs);
                sign *= g.sign;
            };
            auto const div = [&](double x) {
                if (is_nonpositive_integer(x, 1e-14))
                {
                    zero = true;
                    return;
                }
                auto const g = log_gamma_signed(x);
                log_abs -= g.log_abs;
                log_scale += std::abs(g.log_abs);
                sign *= g.sign;
            };
            for (int j = 0; j < m && !zero; ++j)
                if (j != pole)
                    mul(db(j) - k);
            for (int j = 0; j < n; ++j)
                mul(1.0 - da(j) + k);
            for (int j = m; j < q && !zero; ++j)
                div(1.0 - db(j) + k);
            for (int j = n; j < p && !zero; ++j)
                div(da(j) - k);
            if (zero)
                continue;
            double const term = sign * std::exp(log_abs);
            max_term = std::max(max_term, std::abs(term));
            rounding += std::abs(term) * (log_scale + 4.0);
            level.add(term);
        }
        prev_level = last_level;
        last_level = level.value();
        sum.add(last_level);
        partial.push_back(sum.value());
    }

    double value = sum.value();
    double truncation = std::abs(last_level) + std::abs(prev_level);
    if (p == q)
    {
        auto const [accelerated, change] = wynn_epsilon(partial);
        if (change < truncation)
        {
            value = accelerated;
            truncation = change;
        }
    }
    rounding = 4.0 * std::numeric_limits<double>::epsilon()
               * std::max(rounding, std::abs(value));
    return {value, truncation + rounding};
}

// Offsets (in units of pole_perturbation) that split colliding poles.
struct Perturbation
{
    std::vector<double> a_offset;
    std::vector<double> b_offset;
    bool any = false;
};

Perturbation plan_perturbation(MeijerGSpec const& spec)
{
    Perturbation plan;
    plan.a_offset.assign(spec.a.size(), 0.0);
    plan.b_offset.assign(spec.b.size(), 0.0);

    // Clusters of left poles whose parameters differ by integers.
    std::vector<int> cluster(static_cast<std::size_t>(spec.m), -1);
    int clusters = 0;
    for (int j = 0; j < spec.m; ++j)
    {
        if (cluster[j] >= 0)
            continue;
        cluster[j] = clusters;
        for (int k = j + 1; k < spec.m; ++k)
        {
            if (cluster[k] < 0 && near_integer(spec.b[k] - spec.b[j]))
                cluster[k] = clusters;
        }
        ++clusters;
    }
    double widest = 0.0;
    for (int c = 0; c < clusters; ++c)
    {
        std::vector<int> members;
        for (int j = 0; j < spec.m; ++j)
            if (cluster[j] == c)
                members.push_back(j);
        if (members.size() < 2)
            continue;
        plan.any = true;
        double const size = static_cast<double>(members.size());
        for (std::size_t i = 0; i < members.size(); ++i)
        {
            double const off = 2.0 * static_cast<double>(i) - (size - 1.0);
            plan.b_offset[members[i]] = off;
            widest = std::max(widest, std::abs(off));
        }
    }
    // a_j - b_k a positive integer: the two pole families overlap.
    for (int j = 0; j < spec.n; ++j)
    {
        for (int k = 0; k < spec.m; ++k)
        {
            double const gap = spec.a[j] - spec.b[k];
            if (gap > 0.5 && near_integer(gap))
            {
                plan.a_offset[j] = widest + 1.0;
                plan.any = true;
            }
        }
    }
    return plan;
}

bool has_pole_overlap(MeijerGSpec const& spec)
{
    for (int j = 0; j < spec.n; ++j)
        for (int k = 0; k < spec.m; ++k)
        {
            double const gap = spec.a[j] - spec.b[k];
            if (gap > 0.5 && near_integer(gap))
                return true;
        }
    return false;
}

}  // namespace

char const* to_string(EvalMethod method)
{
    switch (method)
    {
        case EvalMethod::contour:
            return "contour";
        case EvalMethod::residue_series:
            return "residue_series";
        case EvalMethod::identity_shortcut:
            return "identity_shortcut";
    }
    return "unknown";
}

void validate(MeijerGSpec const& spec)
{
    if (spec.m < 0 || spec.m > spec.q() || spec.n < 0 || spec.n > spec.p())
    {
        std::ostringstream msg;
        msg << "meijer_g: invalid orders m=" << spec.m << " n=" << spec.n
            << " p=" << spec.p() << " q=" << spec.q();
        throw DomainError(msg.str());
    }
    if (!(spec.argument > 0.0) || !std::isfinite(spec.argument))
    {
        throw DomainError("meijer_g: argument must be positive and finite");
    }
    for (double x : spec.a)
        if (!std::isfinite(x))
            throw DomainError("meijer_g: non-finite a-parameter");
    for (double x : spec.b)
        if (!std::isfinite(x))
            throw DomainError("meijer_g: non-finite b-parameter");
}

MeijerGSpec reflect(MeijerGSpec const& spec)
{
    MeijerGSpec out;
    out.m = spec.n;
    out.n = spec.m;
    for (double x : spec.b)
        out.a.push_back(1.0 - x);
    for (double x : spec.a)
        out.b.push_back(1.0 - x);
    out.argument = 1.0 / spec.argument;
    return out;
}

EvalResult meijer_g_residue_series(MeijerGSpec const& spec, int terms)
{
    validate(spec);
    if (terms < 1)
        throw DomainError("meijer_g_residue_series: need at least one term");
    if (spec.m == 0)
    {
        throw NumericalError("meijer_g_residue_series: no left poles (m = 0); "
                             "use the reflected function");
    }
    if (spec.p() > spec.q())
    {
        throw NumericalError("meijer_g_residue_series: divergent (p > q)");
    }
    if (spec.p() == spec.q() && spec.argument > 1.0)
    {
        throw NumericalError("meijer_g_residue_series: divergent (p == q and z > 1)");
    }

    auto const plan = plan_perturbation(spec);
    EvalResult out;
    out.method = EvalMethod::residue_series;
    if (!plan.any)
    {
        auto const s = residue_sum(spec, plan.a_offset, plan.b_offset, 0.0, terms);
        out.value = s.value;
        out.abs_error_estimate = s.abs_error;
    }
    else
    {
        auto const mirrored = [&](double eps) {
            auto const up = residue_sum(spec, plan.a_offset, plan.b_offset, eps, terms);
            auto const down = residue_sum(spec, plan.a_offset, plan.b_offset, -eps, terms);
            return SeriesValue{0.5 * (up.value + down.value),
                               0.5 * (up.abs_error + down.abs_error)};
        };
        // The mirrored average is even in eps, so the shift costs O(eps^2);
        // the doubled shift measures that cost.
        auto const fine = mirrored(pole_perturbation);
        auto const coarse = mirrored(2.0 * pole_perturbation);
        out.value = fine.value;
        out.abs_error_estimate
            = fine.abs_error + std::abs(coarse.value - fine.value) / 3.0 + coarse.abs_error / 3.0;
        out.perturbation = pole_perturbation;
        out.diagnostic = "colliding poles split by +/-1e-6 (mirrored average)";
    }
    if (!std::isfinite(out.value))
    {
        throw NumericalError("meijer_g_residue_series: non-finite partial sum");
    }
    return out;
}

EvalResult meijer_g(MeijerGSpec const& spec, MeijerGOptions const& options)
{
    validate(spec);
    double const z = spec.argument;

    if (options.allow_shortcuts && spec.m == 1 && spec.n == 0 && spec.p() == 0
        && spec.q() == 1)
    {
        EvalResult out;
        out.method = EvalMethod::identity_shortcut;
        out.value = std::pow(z, spec.b[0]) * std::exp(-z);
        out.abs_error_estimate = 4.0 * std::numeric_limits<double>::epsilon() * out.value;
        return out;
    }

    double const balance = spec.m + spec.n - 0.5 * (spec.p() + spec.q());
    Strip const strip = separating_strip(spec);
    bool const overlap = has_pole_overlap(spec);
    if (balance > 0.0 && strip.left < strip.right && !overlap)
    {
        return contour_integral(spec, strip, options);
    }

    // No vertical contour: sum residues instead.
    bool const series_converges
        = spec.m > 0 && (spec.p() < spec.q() || (spec.p() == spec.q() && z < 1.0));
    if (series_converges)
    {
        auto out = meijer_g_residue_series(spec, options.fallback_terms);
        out.diagnostic = "no separating vertical contour; " + out.diagnostic;
        return out;
    }
    std::ostringstream msg;
    msg << "meijer_g: no convergent representation for m=" << spec.m
        << " n=" << spec.n << " p=" << spec.p() << " q=" << spec.q();
    if (balance <= 0.0)
        msg << " (m+n-(p+q)/2 = " << balance << " <= 0: contour integral diverges)";
    if (!(strip.left < strip.right) || overlap)
        msg << " (pole families overlap)";
    throw NumericalError(msg.str());
}

}  // namespace risfso::special

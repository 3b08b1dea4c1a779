#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace risfso::quadrature
{
struct Options
{
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct Result
{
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail
{
// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980292133, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

struct Panel
{
    double a;
    double b;
    double value;
    double error;

    bool operator<(Panel const& other) const { return error < other.error; }
};

template<class F>
Panel kronrod21(F& f, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double const center = 0.5 * (a + b);
    double const half = 0.5 * (b - a);
    double const fc = f(center);
    double result_k = fc * wgk[10];
    double result_g = 0.0;
    double result_abs = std::abs(result_k);
    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};
    for (std::size_t j = 0; j < 10; ++j)
    {
        double const dx = half * xgk[j];
        double const f1 = f(center - dx);
        double const f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += wgk[j] * (f1 + f2);
        result_abs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1)
        {
            result_g += wg[j / 2] * (f1 + f2);
        }
    }
    double const mean = 0.5 * result_k;
    double result_asc = wgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j)
    {
        result_asc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }
    double const scale = std::abs(half);
    result_asc *= scale;
    result_abs *= scale;
    double err = std::abs((result_k - result_g) * half);
    if (result_asc != 0.0 && err != 0.0)
    {
        err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    }
    if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps))
    {
        err = std::max(50.0 * eps * result_abs, err);
    }
    return {a, b, result_k * half, err};
}
}  // namespace detail

// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b].
template<class F>
Result integrate(F&& f, double a, double b, Options const& opt = {})
{
    Result out;
    if (a == b)
    {
        return out;
    }
    std::priority_queue<detail::Panel> heap;
    auto first = detail::kronrod21(f, a, b);
    out.evaluations = 21;
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int intervals = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)))
    {
        if (intervals >= opt.max_intervals)
        {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        double const mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b)))
        {
            out.converged = false;
            break;
        }
        heap.pop();
        auto left = detail::kronrod21(f, worst.a, mid);
        auto right = detail::kronrod21(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed the drift accumulated by the incremental updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty())
    {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error = total_err;
    return out;
}

// Integrates from `start` towards +inf (direction > 0) or -inf (direction < 0)
// over panels of doubling width, stopping once a panel's contribution is
// negligible against the running total.
template<class F>
Result integrate_expanding(F&& f, double start, double first_width,
                           double direction, Options const& opt = {},
                           int max_panels = 64)
{
    Result out;
    double lo = start;
    double width = first_width;
    int quiet_panels = 0;
    for (int k = 0; k < max_panels; ++k)
    {
        double const hi = lo + (direction > 0 ? width : -width);
        Options panel_opt = opt;
        panel_opt.abs_tol = std::max(opt.abs_tol, 0.1 * opt.rel_tol * std::abs(out.value));
        auto const r = direction > 0 ? integrate(f, lo, hi, panel_opt)
                                     : integrate(f, hi, lo, panel_opt);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
        bool const negligible
            = std::abs(r.value) + r.abs_error
              <= std::max(opt.abs_tol, 0.01 * opt.rel_tol * std::abs(out.value));
        quiet_panels = negligible ? quiet_panels + 1 : 0;
        if (quiet_panels >= 2)
        {
            return out;
        }
        lo = hi;
        width *= 2.0;
    }
    out.converged = false;
    return out;
}

}  // namespace risfso::quadrature

#include <doctest.h>

#include <cmath>
#include <string>

#include "reference_values.hpp"
#include "risfso/error.hpp"
#include "risfso/meijer_g.hpp"
#include "risfso/special_functions.hpp"

namespace sf = risfso::special;
namespace ref = risfso::reference;

namespace
{
sf::MeijerGSpec spec_of(ref::MeijerCase const& c)
{
    return {c.m, c.n, c.a, c.b, c.z};
}

double rel_err(double got, double want)
{
    return std::abs(got - want) / std::abs(want);
}

sf::MeijerGSpec exp_spec(double z)
{
    return {1, 0, {}, {0.0}, z};
}

sf::MeijerGSpec log1p_spec(double z)
{
    return {1, 2, {1.0, 1.0}, {1.0, 0.0}, z};
}

sf::MeijerGSpec bessel_spec(double nu, double z)
{
    return {2, 0, {}, {nu / 2.0, -nu / 2.0}, z};
}

sf::MeijerGOptions no_shortcuts()
{
    sf::MeijerGOptions o;
    o.allow_shortcuts = false;
    return o;
}
}  // namespace

TEST_CASE("frozen reference instances")
{
    for (auto const& c : ref::meijer_cases)
    {
        CAPTURE(std::string(c.name));
        auto const r = sf::meijer_g(spec_of(c), no_shortcuts());
        CHECK(rel_err(r.value, c.value) < 1e-8);
        CHECK(r.abs_error_estimate >= 0.0);
        CHECK(std::isfinite(r.value));
    }
}

TEST_CASE("exponential identity")
{
    for (double z : {1e-3, 0.1, 1.0, 5.0, 30.0})
    {
        CAPTURE(z);
        CHECK(rel_err(sf::meijer_g(exp_spec(z), no_shortcuts()).value, std::exp(-z)) < 1e-8);
    }
    auto const shortcut = sf::meijer_g(exp_spec(2.0));
    CHECK(shortcut.method == sf::EvalMethod::identity_shortcut);
    CHECK(rel_err(shortcut.value, std::exp(-2.0)) < 1e-15);
}

TEST_CASE("log1p identity")
{
    for (double z : {1e-4, 0.25, 1.0, 4.0, 1e3})
    {
        CAPTURE(z);
        CHECK(rel_err(sf::meijer_g(log1p_spec(z), no_shortcuts()).value, std::log1p(z)) < 1e-8);
    }
}

TEST_CASE("Bessel-K identity grid")
{
    for (double nu : {0.0, 0.5, 1.0, 2.3})
    {
        for (double x : {0.5, 1.0, 5.0})
        {
            double const z = x * x / 4.0;
            double const want = 2.0 * sf::bessel_k(nu, x);
            CAPTURE(nu);
            CAPTURE(x);
            CHECK(rel_err(sf::meijer_g(bessel_spec(nu, z), no_shortcuts()).value, want) < 1e-8);
        }
    }
}

TEST_CASE("reflection invariance")
{
    for (auto const& c : ref::meijer_cases)
    {
        CAPTURE(std::string(c.name));
        auto const s = spec_of(c);
        auto const r = sf::reflect(s);
        CHECK(r.m == s.n);
        CHECK(r.n == s.m);
        CHECK(r.argument == doctest::Approx(1.0 / s.argument));
        double const direct = sf::meijer_g(s, no_shortcuts()).value;
        double const reflected = sf::meijer_g(r, no_shortcuts()).value;
        CHECK(rel_err(reflected, direct) < 1e-8);
    }
}

TEST_CASE("residue series agrees with the contour")
{
    SUBCASE("identity instances")
    {
        CHECK(rel_err(sf::meijer_g_residue_series(exp_spec(1.0), 60).value, std::exp(-1.0)) < 1e-8);
        CHECK(rel_err(sf::meijer_g_residue_series(log1p_spec(1.0), 400).value, std::log(2.0)) < 1e-8);
        CHECK(rel_err(sf::meijer_g_residue_series(bessel_spec(0.5, 1.0), 80).value,
                      2.0 * sf::bessel_k(0.5, 2.0))
              < 1e-8);
    }
    SUBCASE("single pole reproduces the exponential series")
    {
        auto const r = sf::meijer_g_residue_series(exp_spec(0.5), 1);
        CHECK(r.value == doctest::Approx(1.0));
        CHECK(r.perturbation == 0.0);
    }
    SUBCASE("repeated parameters are split and the estimates cover the gap")
    {
        for (auto const& c : ref::meijer_cases)
        {
            // Small arguments only: at large z the alternating series cancels.
            if (std::string_view(c.name).rfind("pdf_G_12.5331", 0) != 0 || c.z > 10.0)
                continue;
            CAPTURE(std::string(c.name));
            auto const series = sf::meijer_g_residue_series(spec_of(c), 400);
            auto const contour = sf::meijer_g(spec_of(c), no_shortcuts());
            CHECK(series.perturbation == sf::pole_perturbation);
            CHECK(series.diagnostic.find("split") != std::string::npos);
            CHECK(std::abs(series.value - contour.value)
                  <= 10.0 * (series.abs_error_estimate + contour.abs_error_estimate));
            CHECK(rel_err(series.value, c.value) < 1e-5);
        }
    }
}

TEST_CASE("invalid specifications")
{
    CHECK_THROWS_AS(sf::meijer_g({1, 0, {}, {0.0}, 0.0}), risfso::DomainError);
    CHECK_THROWS_AS(sf::meijer_g({1, 0, {}, {0.0}, -1.0}), risfso::DomainError);
    CHECK_THROWS_AS(sf::meijer_g({2, 0, {}, {0.0}, 1.0}), risfso::DomainError);
    CHECK_THROWS_AS(sf::meijer_g({0, 3, {1.0}, {0.0}, 1.0}), risfso::DomainError);
    // Outside the residue series' convergence region.
    CHECK_THROWS_AS(sf::meijer_g_residue_series(log1p_spec(2.0), 100), risfso::NumericalError);
    CHECK_THROWS_AS(sf::meijer_g_residue_series({1, 1, {0.5, 0.5}, {0.0}, 0.5}, 100),
                    risfso::NumericalError);
}

TEST_CASE("contour reports its diagnostics")
{
    auto const r = sf::meijer_g(log1p_spec(3.0), no_shortcuts());
    CHECK(r.method == sf::EvalMethod::contour);
    CHECK(r.diagnostic.find("contour") != std::string::npos);
    CHECK(std::string(sf::to_string(sf::EvalMethod::residue_series)).size() > 0);
}

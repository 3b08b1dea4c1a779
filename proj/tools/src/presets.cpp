#include "risfso/error.hpp"
#include "risfso_cli/config.hpp"

namespace risfso::cli
{
namespace
{
// Rows: C_n^2 = 2e-11 (strong), 3e-12 (moderate), 5e-14 (weak).
std::vector<TurbulencePreset> const presets = {
    {"table2-red-strong", 10.9537, 2.9833, 700.0, 2e-11},
    {"table2-red-moderate", 4.9477, 1.2310, 700.0, 3e-12},
    {"table2-red-weak", 2.9428, 2.5605, 700.0, 5e-14},
    {"table2-blue-strong", 12.5331, 4.6787, 470.0, 2e-11},
    {"table2-blue-moderate", 5.6690, 1.4315, 470.0, 3e-12},
    {"table2-blue-weak", 2.5012, 2.0807, 470.0, 5e-14},
    {"table2-green-strong", 13.2818, 5.7795, 530.0, 2e-11},
    {"table2-green-moderate", 6.0130, 1.5682, 530.0, 3e-12},
    {"table2-green-weak", 2.3664, 1.9221, 530.0, 5e-14},
};

// The three (alpha, beta) pairs used throughout the single-color figures.
char const* const figure_rows[] = {"table2-red-strong", "table2-red-moderate",
                                   "table2-red-weak"};
constexpr double figure_zetas[] = {1.1, 6.1};

std::string zeta_tag(double zeta)
{
    return zeta == 1.1 ? "z1.1" : "z6.1";
}

std::vector<Scenario> figure_scenarios(channel::DetectionMode mode)
{
    std::vector<Scenario> out;
    for (double zeta : figure_zetas)
    {
        for (char const* row : figure_rows)
        {
            auto const& p = turbulence_preset(row);
            Scenario sc;
            sc.label = std::string(row) + "-" + zeta_tag(zeta) + "-" + channel::to_string(mode);
            sc.alpha = p.alpha;
            sc.beta = p.beta;
            sc.zeta = zeta;
            sc.detection = mode;
            out.push_back(sc);
        }
    }
    return out;
}

// Color comparison: red, green and blue in that order, pointing ζ = 1.1,
// heterodyne detection.
std::vector<Scenario> color_scenarios()
{
    struct Color
    {
        char const* name;
        double alpha;
        double beta;
    };
    constexpr Color colors[] = {
        {"red", 10.9537, 2.9833},
        {"green", 12.5331, 4.6787},
        {"blue", 13.2818, 5.7795},
    };
    std::vector<Scenario> out;
    for (auto const& c : colors)
    {
        Scenario sc;
        sc.label = std::string("fig9-") + c.name;
        sc.alpha = c.alpha;
        sc.beta = c.beta;
        sc.zeta = 1.1;
        sc.detection = channel::DetectionMode::heterodyne();
        out.push_back(sc);
    }
    return out;
}

MetricRequest metric(MetricName name)
{
    MetricRequest m;
    m.name = name;
    return m;
}

MetricRequest outage_at(double threshold_db)
{
    auto m = metric(MetricName::outage);
    m.threshold_db = threshold_db;
    return m;
}

MetricRequest ber(metrics::Scheme s, MetricName name = MetricName::ber)
{
    auto m = metric(name);
    m.scheme = s;
    return m;
}

std::vector<MetricRequest> ber_family()
{
    std::vector<MetricRequest> out;
    for (auto s : metrics::all_schemes)
        out.push_back(ber(s));
    out.push_back(ber(metrics::Scheme::dbpsk, MetricName::ber_asymptote));
    return out;
}

SweepSpec mean_snr_sweep(double stop_db, std::vector<MetricRequest> metrics,
                         std::vector<Scenario> scenarios)
{
    SweepSpec s;
    s.variable = SweepVariable::mean_snr_db;
    s.grid = {0.0, stop_db, 1.0};
    s.metrics = std::move(metrics);
    s.scenarios = std::move(scenarios);
    return s;
}

}  // namespace

std::vector<TurbulencePreset> const& turbulence_presets()
{
    return presets;
}

TurbulencePreset const& turbulence_preset(std::string const& name)
{
    for (auto const& p : presets)
    {
        if (p.name == name)
            return p;
    }
    throw SchemaError("unknown turbulence preset '" + name
                      + "' (expected table2-{red,blue,green}-{strong,moderate,weak})");
}

std::vector<std::string> sweep_preset_names()
{
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9a", "fig9b"};
}

SweepSpec sweep_preset(std::string const& name, SnrSplit split)
{
    auto const hd = channel::DetectionMode::heterodyne();
    auto const imdd = channel::DetectionMode::im_dd();
    SweepSpec s;
    if (name == "fig2")
    {
        s.variable = SweepVariable::threshold_db;
        s.grid = {-10.0, 30.0, 0.5};
        s.metrics = {metric(MetricName::outage)};
        for (auto mode : {hd, imdd})
        {
            for (auto sc : figure_scenarios(mode))
            {
                sc.mean_snr_h_db = 9.0;
                sc.mean_snr_g_db = 9.0;
                s.scenarios.push_back(sc);
            }
        }
    }
    else if (name == "fig3")
        s = mean_snr_sweep(70.0, {outage_at(9.0)}, figure_scenarios(hd));
    else if (name == "fig4")
        s = mean_snr_sweep(100.0, {outage_at(9.0)}, figure_scenarios(imdd));
    else if (name == "fig5")
        s = mean_snr_sweep(60.0, {metric(MetricName::capacity)}, figure_scenarios(hd));
    else if (name == "fig6")
        s = mean_snr_sweep(60.0, {metric(MetricName::capacity)}, figure_scenarios(imdd));
    else if (name == "fig7")
        s = mean_snr_sweep(80.0, ber_family(), figure_scenarios(hd));
    else if (name == "fig8")
        s = mean_snr_sweep(100.0, ber_family(), figure_scenarios(imdd));
    else if (name == "fig9a")
        s = mean_snr_sweep(60.0, {ber(metrics::Scheme::dbpsk)}, color_scenarios());
    else if (name == "fig9b")
        s = mean_snr_sweep(60.0, {metric(MetricName::capacity)}, color_scenarios());
    else
    {
        std::string msg = "unknown preset '" + name + "' (expected";
        for (auto const& n : sweep_preset_names())
            msg += " " + n;
        throw SchemaError(msg + ")");
    }
    s.split = split;
    return s;
}

}  // namespace risfso::cli

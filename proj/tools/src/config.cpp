#include "risfso_cli/config.hpp"

#include <fstream>
#include <set>

#include "risfso/error.hpp"

namespace risfso::cli
{
namespace
{
using nlohmann::json;

[[noreturn]] void fail(std::string const& where, std::string const& what)
{
    throw SchemaError(where + ": " + what);
}

// Reads object members while recording which keys were consumed.
class ObjectReader
{
  public:
    ObjectReader(json const& obj, std::string path, std::vector<std::string>& warnings)
        : obj_(obj), path_(std::move(path)), warnings_(warnings)
    {
        if (!obj_.is_object())
            fail(path_.empty() ? "/" : path_, "expected an object");
    }

    // Records a warning for every key that was never looked up.
    void finish()
    {
        for (auto const& [key, value] : obj_.items())
        {
            if (!seen_.count(key))
                warnings_.push_back(path_ + "/" + key + ": unknown key ignored");
        }
    }

    ObjectReader(ObjectReader const&) = delete;
    ObjectReader& operator=(ObjectReader const&) = delete;

    std::string child(std::string const& key) const { return path_ + "/" + key; }

    json const* find(std::string const& key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::optional<double> number(std::string const& key)
    {
        auto const* v = find(key);
        if (!v)
            return std::nullopt;
        if (!v->is_number())
            fail(child(key), "expected a number");
        return v->get<double>();
    }

    double required_number(std::string const& key)
    {
        auto v = number(key);
        if (!v)
            fail(child(key), "required");
        return *v;
    }

    std::optional<std::string> string(std::string const& key)
    {
        auto const* v = find(key);
        if (!v)
            return std::nullopt;
        if (!v->is_string())
            fail(child(key), "expected a string");
        return v->get<std::string>();
    }

    std::optional<std::uint64_t> unsigned_integer(std::string const& key)
    {
        auto const* v = find(key);
        if (!v)
            return std::nullopt;
        if (!v->is_number_unsigned())
            fail(child(key), "expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

  private:
    json const& obj_;
    std::string path_;
    std::vector<std::string>& warnings_;
    std::set<std::string> seen_;
};

template<class F>
auto rethrow_at(std::string const& where, F&& f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (SchemaError const& e)
    {
        fail(where, e.what());
    }
}

channel::DetectionMode parse_detection(std::string const& text, std::string const& where)
{
    if (text == "heterodyne" || text == "hd")
        return channel::DetectionMode::heterodyne();
    if (text == "im_dd" || text == "imdd")
        return channel::DetectionMode::im_dd();
    fail(where, "unknown detection '" + text + "' (expected heterodyne or im_dd)");
}

double color_wavelength_nm(std::string const& color, std::string const& where)
{
    if (color == "red")
        return 700.0;
    if (color == "green")
        return 530.0;
    if (color == "blue")
        return 470.0;
    fail(where, "unknown color '" + color + "' (expected red, green or blue)");
}

Scenario parse_scenario(json const& node, std::string const& path,
                        std::vector<std::string>& warnings)
{
    ObjectReader r(node, path, warnings);
    Scenario sc;
    sc.label = r.string("label").value_or("");

    auto const preset = r.string("preset");
    auto const* link = r.find("link");
    auto const alpha = r.number("alpha");
    auto const beta = r.number("beta");
    int const sources = (preset ? 1 : 0) + (link ? 1 : 0) + (alpha || beta ? 1 : 0);
    if (sources != 1)
        fail(path, "give exactly one of {alpha, beta}, preset or link");

    if (auto d = r.string("detection"))
        sc.detection = parse_detection(*d, r.child("detection"));
    if (preset)
    {
        auto const& p = rethrow_at(r.child("preset"), [&]() -> TurbulencePreset const& {
            return turbulence_preset(*preset);
        });
        sc.alpha = p.alpha;
        sc.beta = p.beta;
        if (sc.label.empty())
            sc.label = p.name;
    }
    else if (link)
    {
        std::string const lp = r.child("link");
        ObjectReader lr(*link, lp, warnings);
        channel::LinkScenario ls;
        ls.detection = sc.detection;
        auto const color = lr.string("color");
        auto const wl = lr.number("wavelength_nm");
        if (color && wl)
            fail(lp, "give either color or wavelength_nm, not both");
        if (!color && !wl)
            fail(lp + "/wavelength_nm", "required (or give color)");
        ls.wavelength = 1e-9 * (wl ? *wl : color_wavelength_nm(*color, lp + "/color"));
        ls.distance = lr.number("distance_m").value_or(1000.0);
        ls.aperture_diameter = lr.number("aperture_diameter_m").value_or(1e-3);
        ls.cn2 = lr.required_number("cn2");
        ls.receiver_radius = lr.number("receiver_radius_m").value_or(ls.receiver_radius);
        ls.beam_waist = lr.number("beam_waist_m").value_or(ls.beam_waist);
        ls.attenuation = lr.number("attenuation_per_m").value_or(0.0);
        channel::TurbulenceState turb;
        try
        {
            channel::validate(ls);
            turb = channel::alpha_beta(ls);
            sc.mean_snr_scale = std::pow(channel::path_loss(ls), ls.detection.a);
        }
        catch (DomainError const& e)
        {
            fail(lp, e.what());
        }
        if (turb.saturated)
            fail(lp, "turbulence too weak: alpha or beta beyond the supported range");
        sc.alpha = turb.alpha;
        sc.beta = turb.beta;
        lr.finish();
    }
    else
    {
        if (!alpha)
            fail(r.child("alpha"), "required together with beta");
        if (!beta)
            fail(r.child("beta"), "required together with alpha");
        sc.alpha = *alpha;
        sc.beta = *beta;
    }

    sc.zeta = r.number("zeta").value_or(0.0);
    sc.mu = r.number("mu").value_or(1.0);
    auto const both = r.number("mean_snr_db");
    auto const h = r.number("mean_snr_h_db");
    auto const g = r.number("mean_snr_g_db");
    if (both && (h || g))
        fail(path, "give mean_snr_db or mean_snr_h_db/mean_snr_g_db, not both");
    if (both)
    {
        sc.mean_snr_h_db = *both;
        sc.mean_snr_g_db = *both;
    }
    if (h || g)
    {
        if (!(h && g))
            fail(path, "mean_snr_h_db and mean_snr_g_db must be given together");
        sc.mean_snr_h_db = *h;
        sc.mean_snr_g_db = *g;
    }
    r.finish();
    return sc;
}

MetricRequest parse_metric_request(json const& node, std::string const& path,
                                   std::vector<std::string>& warnings)
{
    MetricRequest m;
    if (node.is_string())
    {
        m.name = rethrow_at(path, [&] { return parse_metric(node.get<std::string>()); });
        return m;
    }
    ObjectReader r(node, path, warnings);
    auto const name = r.string("name");
    if (!name)
        fail(r.child("name"), "required");
    m.name = rethrow_at(r.child("name"), [&] { return parse_metric(*name); });
    if (auto s = r.string("scheme"))
        m.scheme = rethrow_at(r.child("scheme"), [&] { return metrics::parse_scheme(*s); });
    m.threshold_db = r.number("threshold_db");
    m.snr_db = r.number("snr_db");
    m.s = r.number("s");
    if (auto n = r.unsigned_integer("samples"))
        m.samples = *n;
    r.finish();
    return m;
}

}  // namespace

Scenario parse_scenario_object(nlohmann::json const& node, std::string const& path,
                                std::vector<std::string>& warnings)
{
    return parse_scenario(node, path, warnings);
}

ParsedConfig parse_config(json const& doc)
{
    ParsedConfig out;
    auto& w = out.warnings;
    {
        ObjectReader r(doc, "", w);
        auto& spec = out.spec;
        if (auto v = r.string("variable"))
            spec.variable = rethrow_at("/variable", [&] { return parse_variable(*v); });
        if (auto s = r.string("split"))
            spec.split = rethrow_at("/split", [&] { return parse_split(*s); });
        if (auto seed = r.unsigned_integer("seed"))
            spec.seed = *seed;
        spec.output_path = r.string("output").value_or("");

        auto const* grid = r.find("grid");
        if (!grid)
            fail("/grid", "required");
        {
            ObjectReader g(*grid, "/grid", w);
            spec.grid.start = g.required_number("start");
            spec.grid.stop = g.required_number("stop");
            spec.grid.step = g.required_number("step");
            g.finish();
        }

        auto const* metrics = r.find("metrics");
        if (!metrics || !metrics->is_array())
            fail("/metrics", "required array");
        for (std::size_t i = 0; i < metrics->size(); ++i)
            spec.metrics.push_back(
                parse_metric_request((*metrics)[i], "/metrics/" + std::to_string(i), w));

        auto const* scenarios = r.find("scenarios");
        if (!scenarios || !scenarios->is_array())
            fail("/scenarios", "required array");
        for (std::size_t i = 0; i < scenarios->size(); ++i)
            spec.scenarios.push_back(
                parse_scenario((*scenarios)[i], "/scenarios/" + std::to_string(i), w));
        r.finish();
    }
    validate(out.spec);
    return out;
}

ParsedConfig parse_config_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError(path + ": cannot open configuration file");
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (json::parse_error const& e)
    {
        throw SchemaError(path + ": " + e.what());
    }
    return parse_config(doc);
}

}  // namespace risfso::cli

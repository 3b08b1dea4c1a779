#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "risfso/error.hpp"
#include "risfso/metrics.hpp"
#include "risfso/simulator.hpp"
#include "risfso_cli/config.hpp"
#include "risfso_cli/emit.hpp"
#include "risfso_cli/sweep.hpp"

namespace
{
using nlohmann::ordered_json;
using namespace risfso;
using namespace risfso::cli;

// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_numerical = 2;

struct CommonOptions
{
    std::string format = "csv";
    std::string out = "-";
    std::optional<std::uint64_t> seed;
};

struct ScenarioOptions
{
    std::optional<double> alpha;
    std::optional<double> beta;
    std::string turbulence;
    // Physical link
    std::optional<double> cn2;
    std::string color;
    std::optional<double> wavelength_nm;
    std::optional<double> distance_m;
    std::optional<double> aperture_m;
    std::optional<double> receiver_radius_m;
    std::optional<double> beam_waist_m;
    std::optional<double> attenuation_per_m;

    std::optional<double> zeta;
    std::string detection = "heterodyne";
    double mu = 1.0;
    std::optional<double> mean_snr_db;
    std::optional<double> mean_snr_h_db;
    std::optional<double> mean_snr_g_db;
    std::string split = "product";
};

void add_scenario_options(CLI::App& cmd, ScenarioOptions& o)
{
    auto* g = cmd.add_option_group("channel", "Turbulence, pointing and mean SNR");
    g->add_option("--alpha", o.alpha, "Large-scale turbulence parameter");
    g->add_option("--beta", o.beta, "Small-scale turbulence parameter");
    g->add_option("--turbulence", o.turbulence,
                  "Named (alpha, beta) preset, e.g. table2-red-strong");
    g->add_option("--cn2", o.cn2, "Refractive-index structure parameter; derives alpha, beta");
    g->add_option("--color", o.color, "red, green or blue (link mode)");
    g->add_option("--wavelength-nm", o.wavelength_nm, "Wavelength in nm (link mode)");
    g->add_option("--distance-m", o.distance_m, "Hop length in m (link mode)");
    g->add_option("--aperture-m", o.aperture_m, "Receiver aperture diameter in m (link mode)");
    g->add_option("--receiver-radius-m", o.receiver_radius_m, "Detector radius in m (link mode)");
    g->add_option("--beam-waist-m", o.beam_waist_m, "Beam waist at the receiver in m (link mode)");
    g->add_option("--attenuation-per-m", o.attenuation_per_m, "Attenuation coefficient (link mode)");
    g->add_option("--zeta", o.zeta, "Pointing-error parameter")->required();
    g->add_option("--detection", o.detection, "heterodyne or im_dd")->capture_default_str();
    g->add_option("--mu", o.mu, "RIS reflection amplitude in (0, 1]")->capture_default_str();
    auto* both = g->add_option("--mean-snr-db", o.mean_snr_db,
                               "Mean SNR in dB, shared between hops according to --split");
    auto* h = g->add_option("--mean-snr-h-db", o.mean_snr_h_db, "Source-RIS mean SNR in dB");
    auto* gg = g->add_option("--mean-snr-g-db", o.mean_snr_g_db, "RIS-destination mean SNR in dB");
    both->excludes(h)->excludes(gg);
    h->needs(gg);
    gg->needs(h);
    g->add_option("--split", o.split, "product or per_hop")->capture_default_str();
}

Scenario build_scenario(ScenarioOptions const& o, bool need_mean)
{
    ordered_json node = ordered_json::object();
    if (o.alpha)
        node["alpha"] = *o.alpha;
    if (o.beta)
        node["beta"] = *o.beta;
    if (!o.turbulence.empty())
        node["preset"] = o.turbulence;
    if (o.cn2)
    {
        ordered_json link = {{"cn2", *o.cn2}};
        if (!o.color.empty())
            link["color"] = o.color;
        if (o.wavelength_nm)
            link["wavelength_nm"] = *o.wavelength_nm;
        if (o.distance_m)
            link["distance_m"] = *o.distance_m;
        if (o.aperture_m)
            link["aperture_diameter_m"] = *o.aperture_m;
        if (o.receiver_radius_m)
            link["receiver_radius_m"] = *o.receiver_radius_m;
        if (o.beam_waist_m)
            link["beam_waist_m"] = *o.beam_waist_m;
        if (o.attenuation_per_m)
            link["attenuation_per_m"] = *o.attenuation_per_m;
        node["link"] = link;
    }
    node["detection"] = o.detection;
    node["zeta"] = *o.zeta;
    node["mu"] = o.mu;

    std::vector<std::string> warnings;
    Scenario sc;
    try
    {
        sc = parse_scenario_object(nlohmann::json(node), "", warnings);
    }
    catch (SchemaError const& e)
    {
        // Messages carry JSON pointers; translate the leading one to a flag.
        std::string msg = e.what();
        if (msg.rfind(": ", 0) == 0)
            msg = msg.substr(2);
        throw SchemaError("channel options: " + msg);
    }
    if (!(sc.zeta > 0.0) || !std::isfinite(sc.zeta))
        throw SchemaError("--zeta: must be positive");
    if (!(sc.mu > 0.0 && sc.mu <= 1.0))
        throw SchemaError("--mu: must lie in (0, 1]");

    auto const split = parse_split(o.split);
    if (o.mean_snr_db)
    {
        auto const [h, g] = split_mean_snr(*o.mean_snr_db, split);
        sc.mean_snr_h_db = linear_to_db(h);
        sc.mean_snr_g_db = linear_to_db(g);
    }
    else if (o.mean_snr_h_db)
    {
        sc.mean_snr_h_db = *o.mean_snr_h_db;
        sc.mean_snr_g_db = *o.mean_snr_g_db;
    }
    else if (need_mean)
    {
        throw SchemaError("--mean-snr-db (or --mean-snr-h-db with --mean-snr-g-db) is required");
    }
    return sc;
}

statistics::SnrDistribution distribution(Scenario const& sc)
{
    OperatingPoint op;
    op.zeta = sc.zeta;
    op.mean_snr_h = db_to_linear(*sc.mean_snr_h_db);
    op.mean_snr_g = db_to_linear(*sc.mean_snr_g_db);
    return make_distribution(sc, op);
}

// Ordered key/value output of a point command.
using Record = ordered_json;

std::string csv_cell(ordered_json const& v)
{
    if (v.is_null())
        return "";
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer())
        return v.dump();
    if (v.is_number())
        return format_number(v.get<double>());
    std::string out;
    for (auto const& item : v)
        out += (out.empty() ? "" : " ") + csv_cell(item);
    return out;
}

void write_record(Record const& rec, CommonOptions const& common)
{
    auto const format = parse_format(common.format);
    auto write = [&](std::ostream& os) {
        if (format == Format::json)
        {
            os << rec.dump(2) << '\n';
            return;
        }
        std::string header;
        std::string row;
        bool first = true;
        for (auto const& [k, v] : rec.items())
        {
            std::string cell = csv_cell(v);
            if (cell.find_first_of(",\"") != std::string::npos)
            {
                std::string quoted = "\"";
                for (char c : cell)
                    quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
                cell = quoted + "\"";
            }
            header += (first ? "" : ",") + k;
            row += (first ? "" : ",") + cell;
            first = false;
        }
        os << header << '\n' << row << '\n';
    };
    if (common.out.empty() || common.out == "-")
    {
        write(std::cout);
        return;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + common.out + "' for writing");
    write(file);
    if (!file.flush())
        throw std::runtime_error("write to '" + common.out + "' failed");
}

ordered_json number_or_null(double v)
{
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

Record scenario_record(statistics::SnrDistribution const& dist, Scenario const& sc)
{
    auto const& p = dist.params();
    return {
        {"alpha", p.alpha},
        {"beta", p.beta},
        {"zeta", p.zeta},
        {"detection", std::string(channel::to_string(sc.detection))},
        {"mu", sc.mu},
        {"mean_snr_db", linear_to_db(dist.mean_snr())},
    };
}

Record eval_record(Record rec, std::string const& key, special::EvalResult const& r)
{
    rec[key] = number_or_null(r.value);
    rec["abs_error_estimate"] = number_or_null(r.abs_error_estimate);
    rec["diagnostic"] = r.diagnostic;
    return rec;
}

void print_sweep_diagnostics(std::vector<MetricCurve> const& curves)
{
    for (auto const& c : curves)
    {
        for (auto const& d : c.diagnostics)
            std::cerr << "risfso: " << c.curve_id << ": " << d << '\n';
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Performance of RIS-aided FSO links over Gamma-Gamma turbulence with pointing errors"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--format", common.format, "csv or json")->capture_default_str();
    app.add_option("--out", common.out, "Output file, - for stdout")->capture_default_str();
    app.add_option("--seed", common.seed, "Monte Carlo seed (default 42)");

    ScenarioOptions so;
    double snr_db = 0.0;
    double s = 1.0;
    double threshold_db = 0.0;
    double rate = 0.0;
    bool shannon_threshold = false;
    std::string scheme_name;

    auto* params = app.add_subcommand("params", "Show the derived channel constants");
    add_scenario_options(*params, so);

    auto* pdf = app.add_subcommand("pdf", "End-to-end SNR density");
    add_scenario_options(*pdf, so);
    pdf->add_option("--snr-db", snr_db, "SNR in dB")->required();

    auto* cdf = app.add_subcommand("cdf", "End-to-end SNR distribution function");
    add_scenario_options(*cdf, so);
    cdf->add_option("--snr-db", snr_db, "SNR in dB")->required();

    auto* mgf = app.add_subcommand("mgf", "Moment generating function E[exp(-s snr)]");
    add_scenario_options(*mgf, so);
    mgf->add_option("--s", s, "Argument s > 0")->required();

    auto* outage = app.add_subcommand("outage", "Outage probability");
    add_scenario_options(*outage, so);
    auto* threshold_opt = outage->add_option("--threshold-db", threshold_db, "SNR threshold in dB");
    auto* rate_opt = outage->add_option("--rate", rate, "Target rate R in bit/s/Hz, threshold exp(2R - 1)");
    threshold_opt->excludes(rate_opt);
    outage->add_flag("--shannon-threshold", shannon_threshold, "With --rate, use exp(2R) - 1")
        ->needs(rate_opt);

    auto* capacity = app.add_subcommand("capacity", "Ergodic capacity in bit/s/Hz");
    add_scenario_options(*capacity, so);

    auto* ber = app.add_subcommand("ber", "Average bit error rate");
    add_scenario_options(*ber, so);
    ber->add_option("--scheme", scheme_name, "CBFSK, NBFSK, CBPSK or DBPSK")->required();

    auto* asymptote = app.add_subcommand("asymptote", "High-SNR BER, diversity order and coding gain");
    add_scenario_options(*asymptote, so);
    asymptote->add_option("--scheme", scheme_name, "CBFSK, NBFSK, CBPSK or DBPSK")->required();

    std::string mc_metric = "outage";
    std::uint64_t samples = 1'000'000;
    unsigned threads = 0;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate next to the closed form");
    add_scenario_options(*mc, so);
    mc->add_option("--metric", mc_metric, "outage, capacity, ber or mgf")->capture_default_str();
    mc->add_option("--threshold-db", threshold_db, "Outage threshold in dB");
    mc->add_option("--scheme", scheme_name, "Modulation for --metric ber");
    mc->add_option("--s", s, "Argument for --metric mgf");
    mc->add_option("--samples", samples, "Number of draws")->capture_default_str();
    mc->add_option("--threads", threads, "Worker threads, 0 for all cores");

    std::string preset;
    std::string config_path;
    std::string sweep_split = "product";
    auto* sweep = app.add_subcommand("sweep", "Evaluate metric curves over a grid");
    auto* preset_opt = sweep->add_option("--preset", preset, "Figure preset");
    auto* config_opt = sweep->add_option("--config", config_path, "JSON sweep description");
    preset_opt->excludes(config_opt);
    sweep->add_option("--split", sweep_split, "product or per_hop (presets only)")
        ->capture_default_str();
    sweep->add_option("--threads", threads, "Worker threads, 0 for all cores");
    sweep->add_flag_callback(
        "--list-presets",
        [] {
            for (auto const& n : sweep_preset_names())
                std::cout << n << '\n';
            throw CLI::Success();
        },
        "List figure presets and exit");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::Success const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return exit_input;
    }

    try
    {
        parse_format(common.format);
        if (sweep->parsed())
        {
            SweepSpec spec;
            if (!preset.empty())
            {
                spec = sweep_preset(preset, parse_split(sweep_split));
            }
            else if (!config_path.empty())
            {
                auto parsed = parse_config_file(config_path);
                for (auto const& w : parsed.warnings)
                    std::cerr << "risfso: warning: unknown key " << w << '\n';
                spec = std::move(parsed.spec);
            }
            else
            {
                throw SchemaError("sweep: give --preset or --config");
            }
            if (common.seed)
                spec.seed = *common.seed;
            std::string out = common.out;
            if ((out.empty() || out == "-") && !spec.output_path.empty()
                && app.get_option("--out")->count() == 0)
                out = spec.output_path;
            auto const curves = run_sweep(spec, threads);
            print_sweep_diagnostics(curves);
            emit(curves, parse_format(common.format), out);
            return exit_ok;
        }

        // Constants other than the means do not depend on the mean SNR.
        auto sc = build_scenario(so, !params->parsed());
        if (!sc.mean_snr_h_db)
        {
            sc.mean_snr_h_db = 0.0;
            sc.mean_snr_g_db = 0.0;
        }
        auto const dist = distribution(sc);
        Record rec = scenario_record(dist, sc);

        if (params->parsed())
        {
            auto const& p = dist.params();
            rec["a"] = p.a;
            rec["chi"] = p.chi;
            rec["M"] = p.M;
            rec["Q"] = p.Q;
            rec["M0"] = p.M0;
            rec["Q0"] = p.Q0;
            rec["delta1"] = p.delta1;
            rec["delta2"] = p.delta2;
            rec["diversity_order"] = metrics::diversity_order(p);
            rec["mean_snr_scale"] = sc.mean_snr_scale;
        }
        else if (pdf->parsed())
        {
            rec["snr_db"] = snr_db;
            rec = eval_record(rec, "pdf", dist.pdf_eval(db_to_linear(snr_db)));
        }
        else if (cdf->parsed())
        {
            rec["snr_db"] = snr_db;
            rec = eval_record(rec, "cdf", dist.cdf_eval(db_to_linear(snr_db)));
        }
        else if (mgf->parsed())
        {
            if (!(s > 0.0))
                throw SchemaError("--s: must be positive");
            rec["s"] = s;
            rec = eval_record(rec, "mgf", dist.mgf_eval(s));
        }
        else if (outage->parsed())
        {
            if (threshold_opt->count() == 0 && rate_opt->count() == 0)
                throw SchemaError("outage: one of --threshold-db or --rate is required");
            double threshold = db_to_linear(threshold_db);
            if (rate_opt->count() > 0)
            {
                if (!(rate > 0.0))
                    throw SchemaError("--rate: must be positive");
                auto const convention = shannon_threshold ? metrics::RateConvention::shannon
                                                          : metrics::RateConvention::exponent_shifted;
                threshold = metrics::threshold_from_rate(rate, convention);
                rec["rate"] = rate;
                rec["rate_convention"] = shannon_threshold ? "shannon" : "exponent_shifted";
                threshold_db = 10.0 * std::log10(threshold);
            }
            rec["threshold_db"] = threshold_db;
            rec["outage"] = metrics::outage_probability(dist, threshold);
        }
        else if (capacity->parsed())
        {
            rec = eval_record(rec, "capacity", metrics::ergodic_capacity_eval(dist));
        }
        else if (ber->parsed())
        {
            auto const m = metrics::modulation(metrics::parse_scheme(scheme_name));
            rec["scheme"] = std::string(metrics::to_string(m.name));
            rec = eval_record(rec, "ber", metrics::average_ber_eval(dist, m));
        }
        else if (asymptote->parsed())
        {
            auto const m = metrics::modulation(metrics::parse_scheme(scheme_name));
            auto const r = metrics::asymptotic_ber(dist, m);
            rec["scheme"] = std::string(metrics::to_string(m.name));
            rec["ber_asymptote"] = number_or_null(r.value);
            rec["diversity_order"] = r.diversity_order;
            rec["coding_gain"] = number_or_null(r.coding_gain);
            rec["coding_gain_is_local"] = r.coding_gain_is_local;
            rec["degenerate"] = r.degenerate;
            rec["warning"] = r.warning;
        }
        else if (mc->parsed())
        {
            simulator::McMetric metric;
            double closed = 0.0;
            if (mc_metric == "outage")
            {
                if (mc->get_option("--threshold-db")->count() == 0)
                    throw SchemaError("--threshold-db: required for --metric outage");
                rec["threshold_db"] = threshold_db;
                metric = simulator::McMetric::outage(db_to_linear(threshold_db));
                closed = metrics::outage_probability(dist, db_to_linear(threshold_db));
            }
            else if (mc_metric == "capacity")
            {
                metric = simulator::McMetric::capacity();
                closed = metrics::ergodic_capacity(dist);
            }
            else if (mc_metric == "ber")
            {
                if (scheme_name.empty())
                    throw SchemaError("--scheme: required for --metric ber");
                auto const m = metrics::modulation(metrics::parse_scheme(scheme_name));
                rec["scheme"] = std::string(metrics::to_string(m.name));
                metric = simulator::McMetric::ber(m.p, m.q);
                closed = metrics::average_ber(dist, m);
            }
            else if (mc_metric == "mgf")
            {
                if (!(s > 0.0))
                    throw SchemaError("--s: must be positive");
                rec["s"] = s;
                metric = simulator::McMetric::mgf(s);
                closed = dist.mgf(s);
            }
            else
            {
                throw SchemaError("--metric: expected outage, capacity, ber or mgf");
            }
            if (samples == 0)
                throw SchemaError("--samples: must be positive");
            auto const& p = dist.params();
            simulator::McChannel ch;
            ch.h = {p.alpha, p.beta, p.zeta, 1.0, p.mean_snr_h};
            ch.g = {p.alpha, p.beta, p.zeta, 1.0, p.mean_snr_g};
            ch.a = p.a;
            ch.chi = p.chi;
            ch.mu = sc.mu;
            simulator::McConfig cfg;
            cfg.sample_count = samples;
            cfg.seed = common.seed.value_or(42);
            cfg.threads = threads;
            auto const est = simulator::estimate_metric(metric, ch, cfg);
            rec["metric"] = mc_metric;
            rec["seed"] = cfg.seed;
            rec["samples"] = est.sample_count;
            rec["mc_mean"] = est.mean;
            rec["mc_std_error"] = est.std_error;
            rec["closed_form"] = closed;
        }
        write_record(rec, common);
        return exit_ok;
    }
    catch (NumericalError const& e)
    {
        std::cerr << "risfso: numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (SchemaError const& e)
    {
        std::cerr << "risfso: invalid input: " << e.what() << '\n';
        return exit_input;
    }
    catch (DomainError const& e)
    {
        std::cerr << "risfso: domain error: " << e.what() << '\n';
        return exit_input;
    }
    catch (std::exception const& e)
    {
        std::cerr << "risfso: " << e.what() << '\n';
        return exit_input;
    }
}

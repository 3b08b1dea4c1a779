#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "risfso/error.hpp"
#include "risfso_cli/config.hpp"
#include "risfso_cli/emit.hpp"
#include "risfso_cli/sweep.hpp"

using namespace risfso;
using namespace risfso::cli;
using nlohmann::json;

namespace
{
json minimal_config()
{
    return json::parse(R"({
        "variable": "mean_snr_db",
        "grid": {"start": 10, "stop": 30, "step": 10},
        "metrics": [{"name": "outage", "threshold_db": 9}, "capacity",
                    {"name": "ber", "scheme": "dbpsk"}],
        "scenarios": [{"label": "red", "alpha": 10.9537, "beta": 2.9833, "zeta": 6.1},
                      {"preset": "table2-blue-strong", "zeta": 1.1, "detection": "im_dd"}]
    })");
}

std::string schema_message(json const& doc)
{
    try
    {
        parse_config(doc);
    }
    catch (SchemaError const& e)
    {
        return e.what();
    }
    return "";
}

int run_cli(std::string const& args)
{
    std::string const cmd = std::string(RISFSO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int const status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(std::string const& name)
{
    return "risfso_test_" + name;
}
}  // namespace

TEST_CASE("grid points")
{
    CHECK(Grid{0.0, 1.0, 0.25}.points().size() == 5);
    CHECK(Grid{0.0, 0.3, 0.1}.points().size() == 4);
    CHECK(Grid{5.0, 5.0, 1.0}.points() == std::vector<double>{5.0});
    CHECK(Grid{0.0, 1.0, 0.0}.points().empty());
}

TEST_CASE("enumeration parsing")
{
    CHECK(parse_split("per_hop") == SnrSplit::per_hop);
    CHECK(to_string(SnrSplit::product) == "product");
    CHECK(parse_variable("threshold_db") == SweepVariable::threshold_db);
    CHECK(parse_metric("mc_ber") == MetricName::mc_ber);
    CHECK(is_monte_carlo(MetricName::mc_mgf));
    CHECK_FALSE(is_monte_carlo(MetricName::ber_asymptote));
    CHECK(parse_format("json") == Format::json);
    CHECK_THROWS_AS(parse_split("sum"), SchemaError);
    CHECK_THROWS_AS(parse_metric("throughput"), SchemaError);
    CHECK_THROWS_AS(parse_format("xml"), SchemaError);
}

TEST_CASE("number formatting round-trips")
{
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5e17})
        CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(30.0) == "30");
    CHECK(linear_to_db(db_to_linear(17.5)) == doctest::Approx(17.5));
    auto const [h, g] = split_mean_snr(20.0, SnrSplit::product);
    CHECK(h * g == doctest::Approx(100.0));
    CHECK(split_mean_snr(20.0, SnrSplit::per_hop).first == doctest::Approx(100.0));
}

TEST_CASE("configuration parsing")
{
    auto const parsed = parse_config(minimal_config());
    auto const& s = parsed.spec;
    CHECK(parsed.warnings.empty());
    CHECK(s.grid.points().size() == 3);
    REQUIRE(s.metrics.size() == 3);
    CHECK(s.metrics[0].threshold_db == 9.0);
    CHECK(s.metrics[1].name == MetricName::capacity);
    CHECK(s.metrics[2].scheme == metrics::Scheme::dbpsk);
    REQUIRE(s.scenarios.size() == 2);
    CHECK(s.scenarios[1].alpha == 12.5331);
    CHECK(s.scenarios[1].label == "table2-blue-strong");
    CHECK(s.scenarios[1].detection == channel::DetectionMode::im_dd());
    CHECK(s.seed == 42);
}

TEST_CASE("unknown keys are reported as warnings")
{
    auto doc = minimal_config();
    doc["colour"] = "red";
    doc["scenarios"][0]["zeta2"] = 3;
    auto const parsed = parse_config(doc);
    REQUIRE(parsed.warnings.size() == 2);
    auto const mentions = [&](std::string const& key) {
        return std::any_of(parsed.warnings.begin(), parsed.warnings.end(),
                           [&](std::string const& w) { return w.find(key) != std::string::npos; });
    };
    CHECK(mentions("/colour"));
    CHECK(mentions("/scenarios/0/zeta2"));
}

TEST_CASE("schema errors name the offending field")
{
    auto doc = minimal_config();
    doc["scenarios"][0].erase("beta");
    CHECK(schema_message(doc).find("/scenarios/0/beta") != std::string::npos);

    doc = minimal_config();
    doc["metrics"][2].erase("scheme");
    CHECK(schema_message(doc).find("/metrics/2/scheme") != std::string::npos);

    doc = minimal_config();
    doc["grid"]["step"] = -1;
    CHECK(schema_message(doc).find("/grid/step") != std::string::npos);

    doc = minimal_config();
    doc["scenarios"][1]["preset"] = "table2-purple-strong";
    CHECK(schema_message(doc).find("/scenarios/1/preset") != std::string::npos);

    doc = minimal_config();
    doc["scenarios"][0]["zeta"] = "wide";
    CHECK(schema_message(doc).find("/scenarios/0/zeta") != std::string::npos);

    doc = minimal_config();
    doc["variable"] = "threshold_db";
    CHECK(schema_message(doc).find("mean_snr_db") != std::string::npos);

    CHECK_THROWS_AS(parse_config_file("/nonexistent/risfso.json"), SchemaError);
}

TEST_CASE("physical link scenarios")
{
    auto doc = minimal_config();
    doc["scenarios"] = json::parse(
        R"([{"link": {"color": "red", "cn2": 5e-14, "attenuation_per_m": 1e-4}, "zeta": 1.1}])");
    auto const s = parse_config(doc).spec.scenarios.at(0);
    CHECK(s.alpha == doctest::Approx(2.9428).epsilon(1e-4));
    CHECK(s.mean_snr_scale == doctest::Approx(std::exp(-0.1)));

    doc["scenarios"][0]["link"]["cn2"] = 1.0;
    CHECK(schema_message(doc).find("/scenarios/0/link") != std::string::npos);
}

TEST_CASE("presets")
{
    CHECK(turbulence_presets().size() == 9);
    CHECK(turbulence_preset("table2-green-weak").beta == 1.9221);
    CHECK_THROWS_AS(turbulence_preset("table3-red-strong"), SchemaError);
    for (auto const& name : sweep_preset_names())
    {
        auto const spec = sweep_preset(name);
        CAPTURE(name);
        CHECK_NOTHROW(validate(spec));
        CHECK_FALSE(spec.scenarios.empty());
    }
    auto const fig3 = sweep_preset("fig3", SnrSplit::per_hop);
    CHECK(fig3.scenarios.size() == 6);
    CHECK(fig3.split == SnrSplit::per_hop);
    CHECK(sweep_preset("fig2").variable == SweepVariable::threshold_db);
    CHECK(sweep_preset("fig8").scenarios[0].detection == channel::DetectionMode::im_dd());
    CHECK_THROWS_AS(sweep_preset("fig10"), SchemaError);
}

TEST_CASE("sweeps are deterministic and carry metadata")
{
    auto spec = parse_config(minimal_config()).spec;
    spec.metrics.push_back({MetricName::mc_outage, std::nullopt, 9.0, std::nullopt, std::nullopt, 2000});
    auto const one = run_sweep(spec, 1);
    auto const two = run_sweep(spec, 2);
    REQUIRE(one.size() == 8);
    CHECK(one[0].curve_id == "red:outage");
    CHECK(one[2].curve_id == "red:ber:DBPSK");
    for (std::size_t i = 0; i < one.size(); ++i)
    {
        CHECK(one[i].curve_id == two[i].curve_id);
        CHECK(one[i].y == two[i].y);
        CHECK(one[i].x == std::vector<double>{10.0, 20.0, 30.0});
    }
    // Outage decreases with the mean SNR.
    CHECK(one[0].y[0] > one[0].y[2]);
    bool has_split = false;
    for (auto const& f : one[0].meta)
        has_split = has_split || (f.key == "split" && f.value == "product");
    CHECK(has_split);
}

TEST_CASE("CSV and JSON output")
{
    MetricCurve c;
    c.curve_id = "a,b:outage";
    c.x = {1.0, 2.0};
    c.y = {0.125, std::nan("")};
    c.meta = {{"label", "say \"hi\""}, {"zeta", "6.1"}};
    c.diagnostics = {"x=2: failed"};
    MetricCurve d = c;
    d.curve_id = "other";
    d.meta = {{"zeta", "1.1"}, {"extra", "1"}};

    std::ostringstream csv;
    write_csv(csv, {c, d});
    std::string const text = csv.str();
    CHECK(text.rfind("x,y,curve_id,label,zeta,extra\n", 0) == 0);
    CHECK(text.find("1,0.125,\"a,b:outage\",\"say \"\"hi\"\"\",6.1,\n") != std::string::npos);
    CHECK(text.find("2,,\"a,b:outage\"") != std::string::npos);
    CHECK(text.find("1,0.125,other,,1.1,1\n") != std::string::npos);

    auto const back = curves_from_json(to_json({c, d}));
    REQUIRE(back.size() == 2);
    CHECK(back[0].curve_id == c.curve_id);
    CHECK(back[0].x == c.x);
    CHECK(back[0].y[0] == c.y[0]);
    CHECK(std::isnan(back[0].y[1]));
    CHECK(back[0].diagnostics == c.diagnostics);
    REQUIRE(back[1].meta.size() == 2);
    CHECK(back[1].meta[0].key == "zeta");
    CHECK(back[1].meta[1].key == "extra");

    // Text round trip keeps every bit.
    MetricCurve e;
    e.curve_id = "bits";
    e.x = {0.1};
    e.y = {1.0 / 3.0};
    std::ostringstream js;
    write_json(js, {e});
    auto const parsed = curves_from_json(nlohmann::ordered_json::parse(js.str()));
    CHECK(parsed.at(0).y.at(0) == e.y[0]);
    CHECK_THROWS_AS(curves_from_json(nlohmann::ordered_json::parse(R"({"curves": [{}]})")), SchemaError);
}

TEST_CASE("command-line exit codes")
{
    CHECK(run_cli("params --alpha 10.9537 --beta 2.9833 --zeta 6.1") == 0);
    CHECK(run_cli("outage --turbulence table2-red-strong --zeta 6.1 --mean-snr-db 30 --threshold-db 9 --format json") == 0);
    CHECK(run_cli("mc --alpha 4.9 --beta 1.2 --zeta 1.1 --mean-snr-db 20 --metric capacity --samples 2000 --threads 1") == 0);
    CHECK(run_cli("sweep --list-presets") == 0);
    CHECK(run_cli("--help") == 0);
    // Schema and argument errors.
    CHECK(run_cli("") == 1);
    CHECK(run_cli("outage --alpha 2 --beta 2 --zeta 1.1 --mean-snr-db 20") == 1);
    CHECK(run_cli("ber --alpha 2 --beta 2 --zeta 1.1 --mean-snr-db 20 --scheme qpsk") == 1);
    CHECK(run_cli("capacity --alpha 2 --zeta 1.1 --mean-snr-db 20") == 1);
    CHECK(run_cli("capacity --alpha 2 --beta 2 --zeta 1.1 --mean-snr-db 20 --format xml") == 1);
    CHECK(run_cli("sweep --preset fig42") == 1);
    CHECK(run_cli("sweep --config /nonexistent.json") == 1);

    auto const out = temp_path("sweep.csv");
    CHECK(run_cli("sweep --preset fig9a --out " + out) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("x,y,curve_id,", 0) == 0);
    std::remove(out.c_str());

    auto const cfg = temp_path("config.json");
    {
        std::ofstream f(cfg);
        f << minimal_config().dump();
    }
    CHECK(run_cli("sweep --config " + cfg + " --format json --out " + temp_path("sweep.json")) == 0);
    std::remove(cfg.c_str());
    std::remove(temp_path("sweep.json").c_str());
}

TEST_CASE("outage threshold from a target rate")
{
    auto const out = temp_path("rate.json");
    auto const read_record = [&] {
        std::ifstream in(out);
        return json::parse(in);
    };
    std::string const scenario = "outage --alpha 4.9477 --beta 1.231 --zeta 1.1 --mean-snr-db 20 --format json --out " + out;

    REQUIRE(run_cli(scenario + " --rate 1") == 0);
    auto rec = read_record();
    CHECK(rec["rate_convention"] == "exponent_shifted");
    CHECK(rec["threshold_db"].get<double>() == doctest::Approx(10.0 / std::log(10.0)).epsilon(1e-12));

    REQUIRE(run_cli(scenario + " --rate 1 --shannon-threshold") == 0);
    rec = read_record();
    CHECK(rec["rate_convention"] == "shannon");
    CHECK(rec["threshold_db"].get<double>() == doctest::Approx(10.0 * std::log10(std::exp(2.0) - 1.0)).epsilon(1e-12));
    double const by_rate = rec["outage"].get<double>();
    REQUIRE(run_cli(scenario + " --threshold-db " + std::to_string(10.0 * std::log10(std::exp(2.0) - 1.0))) == 0);
    CHECK(read_record()["outage"].get<double>() == doctest::Approx(by_rate).epsilon(1e-6));

    CHECK(run_cli(scenario + " --rate 1 --threshold-db 9") == 1);
    CHECK(run_cli(scenario + " --shannon-threshold --threshold-db 9") == 1);
    CHECK(run_cli(scenario + " --rate -1") == 1);
    std::remove(out.c_str());
}

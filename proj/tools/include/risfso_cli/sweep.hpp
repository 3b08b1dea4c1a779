#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risfso/channel.hpp"
#include "risfso/metrics.hpp"

namespace risfso::cli
{
// How a mean SNR given in dB is shared between the two hops.
enum class SnrSplit
{
    // The value is the end-to-end product; each hop gets its square root.
    product,
    // The value is each hop's mean; the product is its square.
    per_hop,
};

std::string_view to_string(SnrSplit split);
SnrSplit parse_split(std::string_view text);

/// One curve family member: analytic channel parameters plus the fixed
/// operating point used when the swept variable is not the mean SNR.
struct Scenario
{
    std::string label;
    double alpha = 0.0;
    double beta = 0.0;
    double zeta = 0.0;
    channel::DetectionMode detection = channel::DetectionMode::heterodyne();
    double mu = 1.0;
    // Per-hop means in dB; fixed when the mean SNR is not swept.
    std::optional<double> mean_snr_h_db;
    std::optional<double> mean_snr_g_db;
    // Power multiplier applied to each hop's mean (path loss^a); 1 unless
    // the scenario was derived from a physical link.
    double mean_snr_scale = 1.0;
};

enum class SweepVariable
{
    mean_snr_db,
    threshold_db,
    zeta,
};

std::string_view to_string(SweepVariable v);
SweepVariable parse_variable(std::string_view text);

struct Grid
{
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    // start, start + step, ... up to stop (inclusive within step/1e6).
    std::vector<double> points() const;
};

enum class MetricName
{
    pdf,
    cdf,
    outage,
    mgf,
    capacity,
    ber,
    ber_asymptote,
    mc_outage,
    mc_capacity,
    mc_ber,
    mc_mgf,
};

std::string_view to_string(MetricName m);
MetricName parse_metric(std::string_view text);
bool is_monte_carlo(MetricName m);

struct MetricRequest
{
    MetricName name = MetricName::outage;
    std::optional<metrics::Scheme> scheme;
    std::optional<double> threshold_db;  // outage
    std::optional<double> snr_db;        // pdf, cdf
    std::optional<double> s;             // mgf
    std::uint64_t samples = 100'000;     // Monte Carlo metrics
};

struct SweepSpec
{
    SweepVariable variable = SweepVariable::mean_snr_db;
    Grid grid;
    std::vector<MetricRequest> metrics;
    std::vector<Scenario> scenarios;
    SnrSplit split = SnrSplit::product;
    std::uint64_t seed = 42;
    std::string output_path;
};

// Throws SchemaError naming the offending field.
void validate(SweepSpec const& spec);

struct MetaField
{
    std::string key;
    std::string value;
};

/// A swept metric. NaN entries in y are gaps whose reasons are listed in
/// `diagnostics`.
struct MetricCurve
{
    std::string curve_id;
    std::vector<double> x;
    std::vector<double> y;
    // Ordered scenario echo, sufficient to re-run the curve.
    std::vector<MetaField> meta;
    std::vector<std::string> diagnostics;
};

// One curve per (scenario, metric), scenario-major. Points are evaluated in
// parallel; the output does not depend on the thread count.
std::vector<MetricCurve> run_sweep(SweepSpec const& spec, unsigned threads = 0);

// Mean SNR state for one evaluation point.
struct OperatingPoint
{
    double mean_snr_h = 1.0;  // linear
    double mean_snr_g = 1.0;
    double zeta = 1.0;
    double threshold = 0.0;   // linear, when the threshold is swept
};

// Linear per-hop means for a total/per-hop value in dB.
std::pair<double, double> split_mean_snr(double db, SnrSplit split);

// Distribution for one scenario at one operating point.
statistics::SnrDistribution make_distribution(Scenario const& scenario, OperatingPoint const& op);

double db_to_linear(double db);
double linear_to_db(double x);

// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace risfso::cli

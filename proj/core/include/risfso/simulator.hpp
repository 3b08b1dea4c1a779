#pragma once

#include <array>
#include <cstdint>
#include <vector>

// Monte Carlo oracle for the reflected cascade. Shares no code with the
// closed-form modules: sampling and the conditional-error kernel are
// implemented here from scratch.
namespace risfso::simulator
{
/// xoshiro256** seeded through splitmix64.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();
    // Uniform on the open interval (0, 1).
    double uniform();
    double normal();

  private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Unit-scale Gamma(shape) variate.
double sample_gamma(double shape, Rng& rng);
// Product of two unit-mean Gamma variates with shapes alpha and beta.
double sample_gg(double alpha, double beta, Rng& rng);
// A0 U^{1/zeta^2}
double sample_pointing(double zeta, double a0, Rng& rng);

struct SubChannel
{
    double alpha = 1.0;
    double beta = 1.0;
    double zeta = 1.0;
    double a0 = 1.0;
    double mean_snr = 1.0;  // already includes path loss
};

struct McChannel
{
    SubChannel h;
    SubChannel g;
    int a = 1;
    double chi = 1.0;
    double mu = 1.0;
};

void validate(McChannel const& channel);

// gamma_h gamma_g mu^2 with gamma_i = mean_i (I_i / E[I_i])^a.
double sample_end_to_end_snr(McChannel const& channel, Rng& rng);

struct McConfig
{
    std::uint64_t sample_count = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t batch_size = 1u << 16;
    // Worker threads; 0 picks the hardware concurrency. Results do not
    // depend on this value.
    unsigned threads = 0;
};

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t sample_count = 0;
};

enum class MetricKind
{
    outage,
    capacity,
    ber,
    mgf,
};

struct McMetric
{
    MetricKind kind = MetricKind::outage;
    double threshold = 0.0;  // outage
    double p = 1.0;          // ber
    double q = 1.0;          // ber
    double s = 1.0;          // mgf

    static McMetric outage(double threshold);
    static McMetric capacity();
    static McMetric ber(double p, double q);
    static McMetric mgf(double s);
};

// Per-sample value whose expectation is the metric.
double metric_sample(McMetric const& metric, McChannel const& channel, double snr);

// All metrics are estimated from one shared set of SNR draws. Batches use
// independent streams keyed by (seed, batch index) and are merged in batch
// order, so results are bit-identical for any thread count.
std::vector<McEstimate> estimate_metrics(std::vector<McMetric> const& metrics,
                                         McChannel const& channel, McConfig const& config);
McEstimate estimate_metric(McMetric const& metric, McChannel const& channel,
                           McConfig const& config);

// Raw SNR draws in batch order (for histograms and empirical CDFs).
std::vector<double> sample_snr(McChannel const& channel, McConfig const& config);

// Regularized upper incomplete gamma Gamma(s, x) / Gamma(s).
double gamma_q(double s, double x);

}  // namespace risfso::simulator

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "axmul/approx.hpp"
#include "axmul/float_mul.hpp"
#include "axmul/rng.hpp"

namespace axmul {

// |acc - approx| / |acc|. Zero accurate value with a nonzero approximation
// has no defined relative error; such samples carry no value and are counted
// separately by the accumulator.
struct RedValue {
    double value = 0.0;
    bool excluded = false;
};

RedValue red(wide_t acc, wide_t approx);
RedValue red_real(double acc, double approx);

struct MetricsReport {
    double mred = 0.0;
    std::vector<double> pred;       // aligned with the requested M list
    std::vector<double> pred_m_pct; // the requested thresholds, in percent
    double pon = 0.0;
    double pun = 0.0;
    double max_red = 0.0;
    std::uint64_t samples = 0;       // every sample fed in
    std::uint64_t included = 0;      // samples contributing to MRED/PRED
    std::uint64_t excluded_zero = 0; // acc == 0, approx != 0
};

// Order-invariant accumulation: relative errors are collected and summed in
// sorted order, so permuting the stream cannot perturb the report. Partial
// accumulators merge associatively for parallel sweeps.
class MetricsAccumulator {
public:
    void add(wide_t acc, wide_t approx);
    void add_real(double acc, double approx);

    // Classified floating-point pair per the feasible outcome table. The two
    // transitions overflow<->underflow cannot occur and are rejected.
    void add_fp(const FpProduct& acc, const FpProduct& approx, const FpFormat& fmt);

    void merge(const MetricsAccumulator& other);

    MetricsReport report(const std::vector<double>& pred_thresholds_pct = {2.0}) const;

private:
    void push(const RedValue& rv);

    std::vector<double> reds_;
    std::uint64_t excluded_zero_ = 0;
    std::uint64_t pon_count_ = 0;
    std::uint64_t pun_count_ = 0;
    std::uint64_t total_ = 0;
};

// Exact metrics of the hybrid high-radix multiplier by full enumeration of
// the encoded operand under a uniform distribution; no sampling involved.
MetricsReport rad_closed_form(int n, int k, const std::vector<double>& pred_thresholds_pct = {2.0});

// Seeded uniform operand pairs over the full n-bit two's-complement range.
struct FixedPair {
    std::int64_t a;
    std::int64_t b;
};
std::vector<FixedPair> sample_uniform_fixed(int n, std::uint64_t count, std::uint64_t seed);
FixedPair sample_uniform_fixed_at(int n, std::uint64_t index, const CounterRng& rng);

// Seeded pairs of normal floating-point data: uniform sign, uniform biased
// exponent over [1, 2^w-2], uniform mantissa bits.
struct FpPair {
    FpDatum a;
    FpDatum b;
};
std::vector<FpPair> sample_uniform_fp_normal(const FpFormat& fmt, std::uint64_t count,
                                             std::uint64_t seed);
FpPair sample_uniform_fp_normal_at(const FpFormat& fmt, std::uint64_t index,
                                   const CounterRng& rng);

// A point with provenance into whatever table it came from.
struct ParetoPoint {
    double error;
    double cost;
    std::size_t tag; // caller-side row index
};

// Non-dominated subset when minimizing both coordinates, ordered by error
// (original order breaks ties).
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

// Sweep driver: evaluates configurations against a sampler and reports
// metrics per configuration.
enum class SamplerKind { ExhaustiveB, UniformFixed, UniformFpNormal };

struct SweepSpec {
    int width = 16;                    // fixed-point width, or ignored for fp
    FpFormat format = FpFormat::half(); // used when sampler == UniformFpNormal
    std::vector<AxConfig> configs;
    SamplerKind sampler = SamplerKind::UniformFixed;
    std::uint64_t samples = 200000;
    std::uint64_t seed = 1;
    RoundingConvention rounding = kDefaultRounding;
};

struct SweepRow {
    AxConfig config;
    MetricsReport metrics;
    bool extreme = false;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

} // namespace axmul

#include "axmul/error_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace axmul {

RedValue red(wide_t acc, wide_t approx) {
    if (acc == 0) {
        if (approx == 0) return {0.0, false};
        return {0.0, true};
    }
    long double num = (long double)(wide_abs(acc - approx));
    long double den = (long double)(wide_abs(acc));
    return {double(num / den), false};
}

RedValue red_real(double acc, double approx) {
    if (acc == 0.0) {
        if (approx == 0.0) return {0.0, false};
        return {0.0, true};
    }
    return {std::abs(acc - approx) / std::abs(acc), false};
}

void MetricsAccumulator::push(const RedValue& rv) {
    ++total_;
    if (rv.excluded) {
        ++excluded_zero_;
        return;
    }
    reds_.push_back(rv.value);
}

void MetricsAccumulator::add(wide_t acc, wide_t approx) { push(red(acc, approx)); }

void MetricsAccumulator::add_real(double acc, double approx) { push(red_real(acc, approx)); }

void MetricsAccumulator::add_fp(const FpProduct& acc, const FpProduct& approx,
                                const FpFormat& fmt) {
    using Flag = FpProduct::Flag;
    ++total_;
    if (acc.flag == Flag::Value && approx.flag == Flag::Value) {
        RedValue rv = red_real(fp_decode(acc.datum, fmt), fp_decode(approx.datum, fmt));
        if (rv.excluded) {
            ++excluded_zero_;
            return;
        }
        reds_.push_back(rv.value);
        return;
    }
    if (acc.flag == approx.flag) { // both overflow or both underflow
        reds_.push_back(0.0);
        return;
    }
    if (acc.flag == Flag::Overflow && approx.flag == Flag::Underflow)
        throw std::logic_error("infeasible transition: accurate overflow, approximate underflow");
    if (acc.flag == Flag::Underflow && approx.flag == Flag::Overflow)
        throw std::logic_error("infeasible transition: accurate underflow, approximate overflow");
    if (acc.flag == Flag::Overflow || approx.flag == Flag::Overflow)
        ++pon_count_;
    else
        ++pun_count_;
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
    reds_.insert(reds_.end(), other.reds_.begin(), other.reds_.end());
    excluded_zero_ += other.excluded_zero_;
    pon_count_ += other.pon_count_;
    pun_count_ += other.pun_count_;
    total_ += other.total_;
}

MetricsReport MetricsAccumulator::report(const std::vector<double>& thresholds_pct) const {
    if (total_ == 0) throw std::invalid_argument("metrics need at least one sample");
    MetricsReport rep;
    rep.samples = total_;
    rep.included = reds_.size();
    rep.excluded_zero = excluded_zero_;
    rep.pred_m_pct = thresholds_pct;

    std::vector<double> sorted = reds_;
    std::sort(sorted.begin(), sorted.end());
    long double sum = 0.0L;
    for (double v : sorted) sum += v;
    rep.mred = sorted.empty() ? 0.0 : double(sum / (long double)sorted.size());
    rep.max_red = sorted.empty() ? 0.0 : sorted.back();

    for (double m_pct : thresholds_pct) {
        double threshold = m_pct / 100.0;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), threshold);
        std::size_t at_least = sorted.end() - it;
        rep.pred.push_back(sorted.empty() ? 0.0 : double(at_least) / double(sorted.size()));
    }
    rep.pon = double(pon_count_) / double(total_);
    rep.pun = double(pun_count_) / double(total_);
    return rep;
}

MetricsReport rad_closed_form(int n, int k, const std::vector<double>& thresholds_pct) {
    if (n > 24) throw std::invalid_argument("closed-form enumeration is limited to widths <= 24");
    MetricsAccumulator acc;
    const std::int64_t lo = FixedOperand::min_value(n);
    const std::int64_t hi = FixedOperand::max_value(n);
    for (std::int64_t b = lo; b <= hi; ++b) {
        FixedOperand fb(n, b);
        std::int64_t y0 = low_chunk_value(fb, k);
        std::int64_t y0_hat = approx_high_radix_digit(y0, k).approx;
        wide_t b_tilde = wide_t(b) - y0 + y0_hat;
        acc.add(wide_t(b), b_tilde);
    }
    return acc.report(thresholds_pct);
}

FixedPair sample_uniform_fixed_at(int n, std::uint64_t index, const CounterRng& rng) {
    auto draw = [&](std::uint64_t i) {
        return FixedOperand::wrap(n, wide_t(std::int64_t(rng.at(i))));
    };
    return FixedPair{draw(2 * index), draw(2 * index + 1)};
}

std::vector<FixedPair> sample_uniform_fixed(int n, std::uint64_t count, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<FixedPair> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(sample_uniform_fixed_at(n, i, rng));
    return out;
}

FpPair sample_uniform_fp_normal_at(const FpFormat& fmt, std::uint64_t index,
                                   const CounterRng& rng) {
    auto draw = [&](std::uint64_t i) {
        std::uint64_t x = rng.at(2 * i);
        std::uint64_t y = rng.at(2 * i + 1);
        FpDatum d;
        d.sign = int(x & 1u);
        d.mantissa = (x >> 1) & ((std::uint64_t(1) << fmt.frac_bits) - 1);
        d.exponent = std::uint32_t(1 + y % (fmt.exp_max() - 1)); // [1, 2^w - 2]
        return d;
    };
    return FpPair{draw(2 * index), draw(2 * index + 1)};
}

std::vector<FpPair> sample_uniform_fp_normal(const FpFormat& fmt, std::uint64_t count,
                                             std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<FpPair> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
        out.push_back(sample_uniform_fp_normal_at(fmt, i, rng));
    return out;
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
    // Sort by error, sweep with a running cost minimum. Within one error
    // group only the cheapest survive; identical duplicates all survive.
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return points[x].error < points[y].error;
    });

    std::vector<ParetoPoint> front;
    double prefix_min = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t begin = i;
        double error = points[order[i]].error;
        double group_min = points[order[i]].cost;
        while (i < order.size() && points[order[i]].error == error) {
            group_min = std::min(group_min, points[order[i]].cost);
            ++i;
        }
        if (group_min < prefix_min) {
            for (std::size_t j = begin; j < i; ++j)
                if (points[order[j]].cost == group_min) front.push_back(points[order[j]]);
            prefix_min = group_min;
        }
    }
    return front;
}

namespace {

int sweep_thread_count() {
    if (const char* env = std::getenv("AXMUL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return std::min(n, 64);
    }
    return 1;
}

// Splits the index range over workers; partial accumulators merge in worker
// order, and the sorted-summation report keeps the result identical to a
// single-threaded run.
template <typename Body>
MetricsAccumulator parallel_accumulate(std::uint64_t count, const Body& body) {
    const int workers = sweep_thread_count();
    if (workers <= 1 || count < 4096) {
        MetricsAccumulator acc;
        for (std::uint64_t i = 0; i < count; ++i) body(acc, i);
        return acc;
    }
    std::vector<MetricsAccumulator> parts(workers);
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(count, begin + chunk);
            for (std::uint64_t i = begin; i < end; ++i) body(parts[w], i);
        });
    }
    for (auto& t : threads) t.join();
    MetricsAccumulator acc;
    for (auto& part : parts) acc.merge(part);
    return acc;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows;
    for (const AxConfig& cfg : spec.configs) {
        MetricsAccumulator acc;
        if (spec.sampler == SamplerKind::UniformFpNormal) {
            if (cfg.family != AxConfig::Family::Accurate &&
                cfg.family != AxConfig::Family::AxFxu && cfg.family != AxConfig::Family::DyFxu)
                throw std::invalid_argument(
                    "floating-point sweeps accept acc, axfxu, or dyfxu configurations");
            CounterRng rng(spec.seed);
            const FpFormat fmt = spec.format;
            int n = fmt.significand_bits() + 1 + ((fmt.significand_bits() + 1) % 2);
            acc = parallel_accumulate(spec.samples, [&](MetricsAccumulator& part,
                                                        std::uint64_t i) {
                FpPair pair = sample_uniform_fp_normal_at(fmt, i, rng);
                FpProduct exact = fp_multiply_accurate(pair.a, pair.b, fmt);
                FpProduct approx;
                if (cfg.family == AxConfig::Family::Accurate)
                    approx = exact;
                else if (cfg.family == AxConfig::Family::AxFxu)
                    approx = fp_multiply_axfpu(pair.a, pair.b, fmt, cfg.p, cfg.r, spec.rounding);
                else
                    approx = fp_multiply_dyfpu(pair.a, pair.b, fmt,
                                               dyfxu_masks(cfg.p, cfg.r, n));
                part.add_fp(exact, approx, fmt);
            });
            rows.push_back(SweepRow{cfg, acc.report({2.0, 5.0, 10.0}), false});
            continue;
        }

        cfg.validate(spec.width);
        if (spec.sampler == SamplerKind::ExhaustiveB) {
            // Exhaustive over the encoded operand with A fixed at 1: exact for
            // the families whose relative error depends only on that operand.
            if (spec.width > 24)
                throw std::invalid_argument("exhaustive sweeps are limited to widths <= 24");
            const std::int64_t lo = FixedOperand::min_value(spec.width);
            const std::uint64_t count = std::uint64_t(1) << spec.width;
            FixedOperand a(spec.width, 1);
            acc = parallel_accumulate(count, [&](MetricsAccumulator& part, std::uint64_t i) {
                FixedOperand fb(spec.width, lo + std::int64_t(i));
                part.add(multiply_accurate(a, fb), multiply_dispatch(cfg, a, fb, spec.rounding));
            });
        } else {
            CounterRng rng(spec.seed);
            acc = parallel_accumulate(spec.samples, [&](MetricsAccumulator& part,
                                                        std::uint64_t i) {
                FixedPair pair = sample_uniform_fixed_at(spec.width, i, rng);
                FixedOperand a(spec.width, pair.a), b(spec.width, pair.b);
                part.add(multiply_accurate(a, b), multiply_dispatch(cfg, a, b, spec.rounding));
            });
        }
        rows.push_back(SweepRow{cfg, acc.report({2.0, 5.0, 10.0}), cfg.extreme(spec.width)});
    }
    return rows;
}

} // namespace axmul

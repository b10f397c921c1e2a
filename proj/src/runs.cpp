#include "axmul/runs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "axmul/csv.hpp"
#include "axmul/dlsb.hpp"

namespace axmul {

namespace {

std::string pct2(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
    return buf;
}

std::string raw(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string sweep_csv_header() {
    return "config,width_or_format,sampler,samples,seed,mred_pct,pred2_pct,pred5_pct,"
           "pred10_pct,pon_pct,pun_pct,max_red,excluded,mred,pred2,pred5,pred10,pon,pun,"
           "extreme";
}

std::string sampler_name(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::ExhaustiveB: return "exhaustive-b";
        case SamplerKind::UniformFixed: return "uniform-fixed";
        case SamplerKind::UniformFpNormal: return "uniform-normal-fp";
    }
    throw std::logic_error("unhandled sampler");
}

SamplerKind sampler_parse(const std::string& name) {
    if (name == "exhaustive-b") return SamplerKind::ExhaustiveB;
    if (name == "uniform-fixed") return SamplerKind::UniformFixed;
    if (name == "uniform-normal-fp") return SamplerKind::UniformFpNormal;
    throw std::invalid_argument("unknown sampler: " + name);
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
    out << sweep_csv_header() << "\n";
    std::string width_or_format =
        spec.sampler == SamplerKind::UniformFpNormal
            ? (spec.format == FpFormat::half() ? "half" : "single")
            : std::to_string(spec.width);
    for (const auto& row : rows) {
        const MetricsReport& m = row.metrics;
        out << csv_quote(row.config.to_string()) << "," << width_or_format << ","
            << sampler_name(spec.sampler) << "," << m.samples << "," << spec.seed << ","
            << pct2(m.mred) << "," << pct2(m.pred[0]) << "," << pct2(m.pred[1]) << ","
            << pct2(m.pred[2]) << "," << pct2(m.pon) << "," << pct2(m.pun) << ","
            << raw(m.max_red) << "," << m.excluded_zero << "," << raw(m.mred) << ","
            << raw(m.pred[0]) << "," << raw(m.pred[1]) << "," << raw(m.pred[2]) << ","
            << raw(m.pon) << "," << raw(m.pun) << "," << (row.extreme ? 1 : 0) << "\n";
    }
}

std::int64_t default_sobel_threshold(int frac_bits) {
    return std::int64_t(460) << frac_bits;
}

KernelRunResult run_kernel(const KernelRunRequest& req) {
    KernelRunResult result;
    result.kernel = req.kernel;
    result.config = req.config;
    auto artifact = [&](const std::string& suffix) {
        std::string path = req.out_prefix + suffix;
        result.artifacts.push_back(path);
        return path;
    };

    if (req.kernel == "sobel" || req.kernel == "blur" || req.kernel == "conv") {
        GrayImage img =
            req.image_path.empty() ? make_test_image() : pgm_read(req.image_path);
        if (req.kernel == "sobel") {
            std::int64_t threshold =
                req.sobel_threshold >= 0 ? req.sobel_threshold : default_sobel_threshold();
            EdgeMap ref = sobel(img, AxConfig::accurate(), threshold);
            EdgeMap test = sobel(img, req.config, threshold);
            result.cer = cer(test, ref);
            GrayImage edge_img(img.width, img.height);
            for (std::size_t i = 0; i < test.size(); ++i)
                edge_img.pixels[i] = test[i] ? 255 : 0;
            if (!req.out_prefix.empty()) pgm_write(artifact(".pgm"), edge_img);
        } else if (req.kernel == "blur") {
            GrayImage ref = gaussian_blur_fp(img, req.blur_format, AxConfig::accurate());
            GrayImage test = gaussian_blur_fp(img, req.blur_format, req.config);
            result.psnr_db = psnr(test, ref);
            result.ssim_val = ssim(test, ref);
            if (!req.out_prefix.empty()) pgm_write(artifact(".pgm"), test);
        } else {
            // smoothing kernel scaled to Q12 so small coefficients survive
            // the rounded operand port
            Kernel2D k = gaussian3x3();
            for (auto& c : k.coeffs) c <<= 12 - k.frac_bits;
            k.frac_bits = 12;
            auto ref = conv2d(img, k, AxConfig::accurate());
            auto test = conv2d(img, k, req.config);
            MetricsAccumulator acc;
            for (std::size_t i = 0; i < ref.size(); ++i)
                acc.add(wide_t(ref[i]), wide_t(test[i]));
            result.mred = acc.report().mred;
            if (!req.out_prefix.empty()) {
                std::ofstream raster(artifact(".csv"));
                for (int y = 0; y < img.height; ++y)
                    for (int x = 0; x < img.width; ++x)
                        raster << test[std::size_t(y) * img.width + x]
                               << (x + 1 == img.width ? "\n" : ",");
            }
        }
        return result;
    }

    if (req.kernel == "fir") {
        auto taps = lowpass_taps_q15();
        CounterRng rng(req.seed);
        std::vector<std::int64_t> signal(req.samples);
        for (std::size_t i = 0; i < signal.size(); ++i)
            signal[i] = FixedOperand::wrap(16, wide_t(std::int64_t(rng.at(i))));
        FirResult ref = fir(signal, taps, AxConfig::accurate());
        FirResult test = fir(signal, taps, req.config);
        MetricsAccumulator acc;
        for (std::size_t i = 0; i < signal.size(); ++i)
            acc.add(wide_t(ref.samples[i]), wide_t(test.samples[i]));
        result.mred = acc.report().mred;
        if (!req.out_prefix.empty()) {
            std::ofstream stream_out(artifact(".csv"));
            stream_out << "t,y\n";
            for (std::size_t i = 0; i < test.samples.size(); ++i)
                stream_out << i << "," << test.samples[i] << "\n";
        }
        return result;
    }

    if (req.kernel == "matmul") {
        // 14-bit unsigned entries: data-like operands in the 16-bit datapath.
        CounterRng rng(req.seed);
        MetricsAccumulator acc;
        std::uint64_t draws = 0;
        const std::uint64_t tiles = req.samples / 9 + 1;
        for (std::uint64_t t = 0; t < tiles; ++t) {
            IntMatrix a(3, 3), b(3, 3);
            for (int i = 0; i < 9; ++i) {
                a.data[i] = std::int64_t(rng.at(draws++) & 0x3FFF);
                b.data[i] = std::int64_t(rng.at(draws++) & 0x3FFF);
            }
            IntMatrix ref = matmul_tiled(a, b, AxConfig::accurate());
            IntMatrix test = matmul_tiled(a, b, req.config);
            for (int i = 0; i < 9; ++i) acc.add(wide_t(ref.data[i]), wide_t(test.data[i]));
        }
        result.mred = acc.report().mred;
        return result;
    }

    throw std::invalid_argument("unknown kernel: " + req.kernel);
}

void write_kernel_csv(std::ostream& out, const std::vector<KernelRunResult>& results) {
    out << "kernel,config,cer,psnr_db,ssim,mred_pct\n";
    auto cell = [&](double v, bool pct) -> std::string {
        if (v < 0) return "";
        if (std::isinf(v)) return "inf";
        return pct ? pct2(v) : raw(v);
    };
    for (const auto& r : results)
        out << r.kernel << "," << csv_quote(r.config.to_string()) << "," << cell(r.cer, false) << ","
            << cell(r.psnr_db, false) << "," << cell(r.ssim_val, false) << ","
            << cell(r.mred, true) << "\n";
}

std::vector<std::string> oracle_suite_names() {
    return {"fixed", "dlsb", "dyfxu", "partition", "winograd"};
}

namespace {

OracleOutcome oracle_fixed() {
    OracleOutcome o{"fixed", 0, 0};
    for (int av = -128; av <= 127; ++av)
        for (int bv = -128; bv <= 127; ++bv) {
            FixedOperand a(8, av), b(8, bv);
            ++o.checked;
            if (multiply_accurate(a, b) != oracle_multiply(a, b)) ++o.failed;
        }
    return o;
}

OracleOutcome oracle_dlsb() {
    OracleOutcome o{"dlsb", 0, 0};
    for (int av = -128; av <= 127; ++av)
        for (int ae = 0; ae <= 1; ++ae)
            for (int bv = -128; bv <= 127; ++bv)
                for (int be = 0; be <= 1; ++be) {
                    DlsbOperand a(FixedOperand(8, av), ae), b(FixedOperand(8, bv), be);
                    wide_t want = wide_t(dlsb_value(a)) * dlsb_value(b);
                    ++o.checked;
                    if (dlsb_multiply(a, b) != want ||
                        dlsb_multiply_straightforward(a, b) != want)
                        ++o.failed;
                }
    return o;
}

OracleOutcome oracle_dyfxu(bool inject_fault) {
    OracleOutcome o{"dyfxu", 0, 0};
    const int n = 8;
    for (int p = 0; p < n / 2 - 1; ++p)
        for (int r = 0; r < n - 1; ++r) {
            DyFxuMasks masks = dyfxu_masks(p, r, n);
            if (inject_fault) masks.keep_b ^= 1ULL << 4;
            for (int av = -128; av <= 127; ++av)
                for (int bv = -128; bv <= 127; ++bv) {
                    FixedOperand a(n, av), b(n, bv);
                    ++o.checked;
                    wide_t direct = multiply_axfxu(a, b, p, r);
                    wide_t masked;
                    try {
                        masked = multiply_dyfxu(a, b, masks);
                    } catch (const std::invalid_argument&) {
                        ++o.failed;
                        continue;
                    }
                    if (masked != direct) ++o.failed;
                }
        }
    return o;
}

OracleOutcome oracle_partition() {
    OracleOutcome o{"partition", 0, 0};
    CounterRng rng(2024);
    for (std::uint64_t i = 0; i < 1000000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        FixedOperand a(16, pr.a), b(16, pr.b);
        ++o.checked;
        if (partition_multiply(a, b) != oracle_multiply(a, b)) ++o.failed;
    }
    return o;
}

OracleOutcome oracle_winograd() {
    OracleOutcome o{"winograd", 0, 0};
    CounterRng rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        GrayImage img(64, 64);
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            img.pixels[i] = std::uint8_t(rng.at(trial * 4096 + i));
        Kernel2D k{3, 0, {}};
        k.coeffs.resize(9);
        for (int i = 0; i < 9; ++i)
            k.coeffs[i] = std::int64_t(rng.at(100000 + trial * 16 + i) % 17) - 8;
        auto direct = conv2d(img, k, AxConfig::accurate());
        auto wino = winograd_conv3x3(img, k);
        for (int y = 1; y < img.height - 1; ++y)
            for (int x = 1; x < img.width - 1; ++x) {
                ++o.checked;
                double diff = std::abs(double(direct[std::size_t(y) * img.width + x]) -
                                       wino[std::size_t(y) * img.width + x]);
                if (diff > 1e-9) ++o.failed;
            }
    }
    return o;
}

} // namespace

std::vector<OracleOutcome> run_oracles(const std::vector<std::string>& suites,
                                       bool inject_fault) {
    std::vector<OracleOutcome> outcomes;
    for (const std::string& name : suites) {
        if (name == "fixed") outcomes.push_back(oracle_fixed());
        else if (name == "dlsb") outcomes.push_back(oracle_dlsb());
        else if (name == "dyfxu") outcomes.push_back(oracle_dyfxu(inject_fault));
        else if (name == "partition") outcomes.push_back(oracle_partition());
        else if (name == "winograd") outcomes.push_back(oracle_winograd());
        else throw std::invalid_argument("unknown oracle suite: " + name);
    }
    return outcomes;
}

namespace {

} // namespace

ParetoCsvResult pareto_from_csv(std::istream& in, const std::string& error_col,
                                const std::string& cost_col) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("pareto: empty input");
    auto cols = split_csv_line(header);
    auto find_col = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return int(i);
        throw std::runtime_error("pareto: missing column " + name);
    };
    int ei = find_col(error_col);
    int ci = find_col(cost_col);

    std::vector<std::string> lines;
    std::vector<ParetoPoint> points;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (int(cells.size()) <= std::max(ei, ci))
            throw std::runtime_error("pareto: short row: " + line);
        points.push_back(
            ParetoPoint{std::stod(cells[ei]), std::stod(cells[ci]), lines.size()});
        lines.push_back(line);
    }
    auto front = pareto_front(points);
    ParetoCsvResult result;
    result.header = header;
    for (const auto& p : front) result.rows.push_back(lines[p.tag]);
    return result;
}

NetRunResult run_net(const NetRunRequest& req) {
    QuantNet net = axnet_read(req.net_path);
    EnergyTable table = EnergyTable::from_csv(req.energy_table_path);

    AssignmentScheme scheme;
    scheme.granularity = req.granularity;
    scheme.filter_group_sizes = req.filter_group_sizes;
    for (const auto& [unit, text] : req.assignments)
        scheme.table.emplace(unit, AxConfig::parse(text));

    ResolvedAssignment resolved(net, scheme);
    AssignmentScheme accurate = AssignmentScheme::uniform(AxConfig::accurate());
    ResolvedAssignment accurate_resolved(net, accurate);

    QuantTensor input;
    input.channels = net.input_channels;
    input.height = net.input_height;
    input.width = net.input_width;
    input.zero_point = net.input_zero_point;
    input.scale = net.input_scale;
    input.data.resize(std::size_t(input.channels) * input.height * input.width);
    CounterRng rng(req.seed);
    for (std::size_t i = 0; i < input.data.size(); ++i)
        input.data[i] = std::uint8_t(rng.at(i));

    QuantTensor ref = net_forward(net, input, accurate_resolved);
    QuantTensor test = net_forward(net, input, resolved);

    MetricsAccumulator acc;
    for (std::size_t i = 0; i < ref.data.size(); ++i)
        acc.add(wide_t(std::int64_t(ref.data[i]) - ref.zero_point),
                wide_t(std::int64_t(test.data[i]) - test.zero_point));
    auto metrics = acc.report();

    NetRunResult result;
    std::ostringstream scheme_text;
    scheme_text << granularity_name(req.granularity);
    for (const auto& [unit, text] : req.assignments)
        scheme_text << ";" << (unit < 0 ? "*" : std::to_string(unit)) << "=" << text;
    result.scheme_text = scheme_text.str();
    result.output_mred = metrics.mred;
    result.accuracy_proxy = 1.0 - metrics.mred;
    result.energy_units = estimate_energy(net, scheme, table).total;
    result.accurate_energy_units = estimate_energy(net, accurate, table).total;
    return result;
}

void write_net_csv(std::ostream& out, const std::vector<NetRunResult>& results) {
    out << "scheme,accuracy_proxy,energy_units\n";
    for (const auto& r : results)
        out << csv_quote(r.scheme_text) << "," << raw(r.accuracy_proxy) << ","
            << raw(r.energy_units) << "\n";
}

} // namespace axmul

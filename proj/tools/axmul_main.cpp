// Command-line front end: error-metric sweeps, DSP kernel runs against the
// accurate baseline, exhaustive equivalence oracles, Pareto extraction, and
// quantized-network evaluation.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "axmul/runs.hpp"

using namespace axmul;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        auto out = open_out(path);
        out << text;
        if (!out) throw std::runtime_error("write failed: " + path);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate multiplier laboratory"};
    app.set_config("--config", "", "read options from a config file");
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    std::uint64_t samples = 200000;
    std::string out_path;
    app.add_option("--seed", seed, "sampler seed")->capture_default_str();
    app.add_option("--samples", samples, "sample count")->capture_default_str();
    app.add_option("--out", out_path, "output path (default: stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "error metrics per multiplier configuration");
    std::vector<std::string> cfg_texts;
    int width = 16;
    std::string format_name = "half";
    std::string sampler = "uniform-fixed";
    bool exhaustive_b = false;
    bool alt_rounding = false;
    sweep->add_option("--cfg", cfg_texts, "configuration (repeatable), e.g. rad:k=6")
        ->required();
    sweep->add_option("--n", width, "fixed-point width")->capture_default_str();
    sweep->add_option("--format", format_name, "half|single for fp sweeps")
        ->capture_default_str();
    sweep->add_option("--sampler", sampler, "exhaustive-b|uniform-fixed|uniform-normal-fp")
        ->capture_default_str();
    sweep->add_flag("--exhaustive-b", exhaustive_b, "shorthand for --sampler exhaustive-b");
    sweep->add_flag("--alt-rounding", alt_rounding,
                    "use the drop-(R-1) rounding interpretation");
    sweep->callback([&] {
        SweepSpec spec;
        spec.width = width;
        spec.samples = samples;
        spec.seed = seed;
        spec.sampler = exhaustive_b ? SamplerKind::ExhaustiveB : sampler_parse(sampler);
        spec.rounding =
            alt_rounding ? RoundingConvention::DropRMinusOne : RoundingConvention::DropR;
        if (format_name == "half") spec.format = FpFormat::half();
        else if (format_name == "single") spec.format = FpFormat::single();
        else throw CLI::ValidationError("--format", "expected half or single");
        for (const auto& text : cfg_texts) spec.configs.push_back(AxConfig::parse(text));
        auto rows = run_sweep(spec);
        std::ostringstream os;
        write_sweep_csv(os, spec, rows);
        emit(out_path, os.str());
    });

    // kernel
    auto* kernel = app.add_subcommand("kernel", "run a DSP kernel against the accurate baseline");
    KernelRunRequest kreq;
    std::string kernel_cfg = "acc";
    std::string blur_format = "single";
    kernel->add_option("name", kreq.kernel, "sobel|blur|conv|fir|matmul")->required();
    kernel->add_option("--image", kreq.image_path, "input PGM (default: built-in scene)");
    kernel->add_option("--cfg", kernel_cfg, "multiplier configuration")->capture_default_str();
    kernel->add_option("--out-prefix", kreq.out_prefix, "artifact path prefix");
    kernel->add_option("--threshold", kreq.sobel_threshold, "sobel edge threshold (raw units)");
    kernel->add_option("--blur-format", blur_format, "half|single")->capture_default_str();
    kernel->callback([&] {
        kreq.config = AxConfig::parse(kernel_cfg);
        kreq.samples = samples;
        kreq.seed = seed;
        if (blur_format == "half") kreq.blur_format = FpFormat::half();
        else if (blur_format == "single") kreq.blur_format = FpFormat::single();
        else throw CLI::ValidationError("--blur-format", "expected half or single");
        auto result = run_kernel(kreq);
        std::ostringstream os;
        write_kernel_csv(os, {result});
        emit(out_path, os.str());
    });

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exhaustive equivalence suites");
    std::vector<std::string> suites;
    bool inject_fault = false;
    oracle->add_option("suite", suites, "fixed|dlsb|dyfxu|partition|winograd|all");
    oracle->add_flag("--inject-fault", inject_fault,
                     "flip one runtime mask bit to prove the suite catches faults");
    oracle->callback([&] {
        if (suites.empty()) throw CLI::ValidationError("suite", "name at least one suite");
        if (suites.size() == 1 && suites[0] == "all") suites = oracle_suite_names();
        auto outcomes = run_oracles(suites, inject_fault);
        bool any_failed = false;
        std::ostringstream os;
        for (const auto& o : outcomes) {
            os << o.suite << ": " << (o.failed == 0 ? "ok" : "FAILED") << " (" << o.checked
               << " checked, " << o.failed << " failed)\n";
            any_failed |= o.failed != 0;
        }
        emit(out_path, os.str());
        if (any_failed) throw std::runtime_error("oracle suite failed");
    });

    // pareto
    auto* pareto = app.add_subcommand("pareto", "non-dominated subset of a CSV");
    std::string pareto_in, error_col = "mred_pct", cost_col = "cost_units";
    pareto->add_option("input", pareto_in, "input CSV")->required()->check(CLI::ExistingFile);
    pareto->add_option("--error-col", error_col, "error column name")->capture_default_str();
    pareto->add_option("--cost-col", cost_col, "cost column name")->capture_default_str();
    pareto->callback([&] {
        std::ifstream in(pareto_in);
        if (!in) throw std::runtime_error("cannot open " + pareto_in);
        auto result = pareto_from_csv(in, error_col, cost_col);
        std::ostringstream os;
        os << result.header << "\n";
        for (const auto& row : result.rows) os << row << "\n";
        emit(out_path, os.str());
    });

    // net
    auto* net = app.add_subcommand("net", "quantized network with distributed multipliers");
    NetRunRequest nreq;
    std::string granularity = "layer";
    std::vector<std::string> assigns;
    net->add_option("network", nreq.net_path, "*.axnet description")
        ->required()
        ->check(CLI::ExistingFile);
    net->add_option("--energy-table", nreq.energy_table_path, "per-multiplication cost CSV")
        ->required()
        ->check(CLI::ExistingFile);
    net->add_option("--granularity", granularity,
                    "layer|filter|kernel-channel|kernel-row|kernel-column")
        ->capture_default_str();
    net->add_option("--assign", assigns, "unit=config, '*' for all (repeatable)")->required();
    net->add_option("--filter-groups", nreq.filter_group_sizes,
                    "filter-group sizes for filter granularity");
    net->callback([&] {
        nreq.granularity = granularity_parse(granularity);
        nreq.seed = seed;
        for (const auto& text : assigns) {
            auto eq = text.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--assign", "expected unit=config");
            std::string unit = text.substr(0, eq);
            nreq.assignments.emplace_back(unit == "*" ? -1 : std::stoi(unit),
                                          text.substr(eq + 1));
        }
        auto result = run_net(nreq);
        std::ostringstream os;
        write_net_csv(os, {result});
        emit(out_path, os.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

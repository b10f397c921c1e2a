#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "axmul/error_lab.hpp"
#include "axmul/kernels.hpp"
#include "axmul/net.hpp"

namespace axmul {

// CSV row schema shared by the sweep command and the library reports:
// config,width_or_format,sampler,samples,seed,mred_pct,pred2_pct,pred5_pct,
// pred10_pct,pon_pct,pun_pct,max_red,excluded plus full-precision raw
// fraction columns for tooling.
std::string sweep_csv_header();
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

std::string sampler_name(SamplerKind kind);
SamplerKind sampler_parse(const std::string& name);

struct KernelRunRequest {
    std::string kernel;      // sobel | blur | fir | matmul | conv
    std::string image_path;  // empty -> built-in test scene
    std::string out_prefix;  // artifacts written as <prefix>.<ext>
    AxConfig config;
    std::uint64_t samples = 200000; // fir/matmul sample count
    std::uint64_t seed = 1;
    std::int64_t sobel_threshold = -1; // -1 -> default
    FpFormat blur_format = FpFormat::single();
};

struct KernelRunResult {
    std::string kernel;
    AxConfig config;
    double cer = -1;
    double psnr_db = -1;
    double ssim_val = -1;
    double mred = -1; // fraction
    std::vector<std::string> artifacts;
};

// Runs the kernel under the configuration and under the accurate baseline,
// computes the applicable quality metric, writes artifacts.
KernelRunResult run_kernel(const KernelRunRequest& req);
void write_kernel_csv(std::ostream& out, const std::vector<KernelRunResult>& results);

// Default Sobel threshold used by the benchmarks, in units scaled by the
// mask's fractional bits.
std::int64_t default_sobel_threshold(int frac_bits = 12);

struct OracleOutcome {
    std::string suite;
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
};

// Exhaustive/brute-force equivalence suites. inject_fault flips one DyFxu
// mask bit so the harness itself can be shown to catch a broken datapath.
std::vector<OracleOutcome> run_oracles(const std::vector<std::string>& suites,
                                       bool inject_fault = false);
std::vector<std::string> oracle_suite_names();

// Pareto extraction over a CSV: keeps source rows of the non-dominated set.
struct ParetoCsvResult {
    std::string header;
    std::vector<std::string> rows;
};
ParetoCsvResult pareto_from_csv(std::istream& in, const std::string& error_col,
                                const std::string& cost_col);

struct NetRunRequest {
    std::string net_path;
    std::string energy_table_path;
    Granularity granularity = Granularity::Layer;
    std::vector<std::pair<int, std::string>> assignments; // unit -> config text
    std::vector<int> filter_group_sizes;
    std::uint64_t seed = 1;
};

struct NetRunResult {
    std::string scheme_text;
    double accuracy_proxy = 0; // 1 - output MRED vs the accurate assignment
    double output_mred = 0;
    double energy_units = 0;
    double accurate_energy_units = 0;
};

NetRunResult run_net(const NetRunRequest& req);
void write_net_csv(std::ostream& out, const std::vector<NetRunResult>& results);

} // namespace axmul

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "axmul/approx.hpp"

namespace axmul {

// One quantized convolutional layer: 8-bit unsigned weights with an affine
// (zero-point, scale) per tensor. Weight tensor shape is
// filters x channels x kernel x kernel.
struct QuantConvLayer {
    std::string name;
    int in_channels = 1;
    int filters = 1;
    int kernel = 3;
    int stride = 1;
    std::uint8_t weight_zero_point = 0;
    double weight_scale = 1.0;
    std::uint8_t out_zero_point = 0;
    double out_scale = 1.0;
    std::vector<std::uint8_t> weights; // filters*in_channels*kernel*kernel
    std::vector<std::int64_t> bias;    // per filter, in accumulator units

    std::uint8_t weight_at(int f, int c, int ky, int kx) const {
        return weights[((std::size_t(f) * in_channels + c) * kernel + ky) * kernel + kx];
    }
};

struct QuantTensor {
    int channels = 1;
    int height = 1;
    int width = 1;
    std::uint8_t zero_point = 0;
    double scale = 1.0;
    std::vector<std::uint8_t> data; // channels x height x width

    std::uint8_t at(int c, int y, int x) const {
        return data[(std::size_t(c) * height + y) * width + x];
    }
    std::uint8_t& at(int c, int y, int x) {
        return data[(std::size_t(c) * height + y) * width + x];
    }
};

struct QuantNet {
    int input_channels = 1;
    int input_height = 8;
    int input_width = 8;
    std::uint8_t input_zero_point = 0;
    double input_scale = 1.0;
    std::vector<QuantConvLayer> layers;
};

// Structured text description with hex weight blobs; extension .axnet.
QuantNet axnet_read(const std::string& path);
QuantNet axnet_parse(std::istream& in);
void axnet_write(const std::string& path, const QuantNet& net);

// How multiplier configurations are distributed over the network.
enum class Granularity { Layer, Filter, KernelChannel, KernelRow, KernelColumn };

Granularity granularity_parse(const std::string& name);
std::string granularity_name(Granularity g);

// Map from unit index to configuration. Unit meaning per granularity:
//   Layer         -> layer index
//   Filter        -> filter-group index (group boundaries are explicit)
//   KernelChannel -> input-channel index within each filter
//   KernelRow     -> kernel row index
//   KernelColumn  -> kernel column index
struct AssignmentScheme {
    Granularity granularity = Granularity::Layer;
    std::map<int, AxConfig> table;
    std::vector<int> filter_group_sizes; // Filter granularity only

    static AssignmentScheme uniform(const AxConfig& cfg);
};

// Fully resolved view: every multiplication in the network maps to exactly
// one configuration. Construction fails on any uncovered unit.
class ResolvedAssignment {
public:
    ResolvedAssignment(const QuantNet& net, const AssignmentScheme& scheme);

    const AxConfig& config_at(int layer, int filter, int channel, int row, int col) const;
    const AssignmentScheme& scheme() const { return scheme_; }

private:
    AssignmentScheme scheme_;
    std::vector<int> filter_group_of_; // flattened per-layer filter -> group
    std::vector<int> filter_group_offset_;
    int max_layer_ = 0;
};

// Integer convolution with per-multiplication dispatch: raw 8-bit operands
// are zero-extended into the 10-bit signed domain, multiplied through the
// configured circuit, and the zero-point cross terms are accumulated
// exactly. Output is requantized affinely. Stride from the layer.
QuantTensor conv_forward_quant(const QuantConvLayer& layer, const QuantTensor& input,
                               const ResolvedAssignment& assignment, int layer_index);

// Runs all layers in sequence.
QuantTensor net_forward(const QuantNet& net, const QuantTensor& input,
                        const ResolvedAssignment& assignment);

// Per-multiplication cost table keyed by configuration text.
struct EnergyTable {
    std::map<std::string, double> cost;

    static EnergyTable from_csv(const std::string& path);
    double at(const AxConfig& cfg) const;
};

struct EnergyBreakdown {
    double total = 0;
    std::vector<std::pair<std::string, double>> per_layer;
};

// Pure counting: sum over every multiplication of its configured cost.
// Input spatial dims come from the network description.
EnergyBreakdown estimate_energy(const QuantNet& net, const AssignmentScheme& scheme,
                                const EnergyTable& table);

// Multiplications a layer performs for the given input size.
std::uint64_t layer_mult_count(const QuantConvLayer& layer, int in_h, int in_w);

} // namespace axmul

#include "axmul/net.hpp"

#include "axmul/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace axmul {

namespace {

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        s += digits[b >> 4];
        s += digits[b & 0xF];
    }
    return s;
}

std::vector<std::uint8_t> hex_decode(const std::string& s) {
    if (s.size() % 2 != 0) throw std::runtime_error("axnet: odd hex blob length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::runtime_error("axnet: bad hex digit");
    };
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::uint8_t(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
    return out;
}

} // namespace

QuantNet axnet_parse(std::istream& in) {
    QuantNet net;
    std::string line;
    QuantConvLayer* current = nullptr;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("axnet:" + std::to_string(lineno) + ": " + msg);
    };
    bool saw_magic = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (!saw_magic) {
            int version;
            if (key != "axnet" || !(ls >> version) || version != 1)
                fail("expected 'axnet 1' header");
            saw_magic = true;
            continue;
        }
        if (key == "input") {
            if (!(ls >> net.input_channels >> net.input_height >> net.input_width))
                fail("input wants: channels height width");
        } else if (key == "input_quant") {
            int zp;
            if (!(ls >> zp >> net.input_scale)) fail("input_quant wants: zero_point scale");
            net.input_zero_point = std::uint8_t(zp);
        } else if (key == "layer") {
            net.layers.emplace_back();
            current = &net.layers.back();
            ls >> current->name;
        } else if (key == "shape") {
            if (!current) fail("shape outside a layer");
            if (!(ls >> current->filters >> current->in_channels >> current->kernel >>
                  current->stride))
                fail("shape wants: filters channels kernel stride");
        } else if (key == "weight_quant") {
            if (!current) fail("weight_quant outside a layer");
            int zp;
            if (!(ls >> zp >> current->weight_scale)) fail("weight_quant wants: zp scale");
            current->weight_zero_point = std::uint8_t(zp);
        } else if (key == "out_quant") {
            if (!current) fail("out_quant outside a layer");
            int zp;
            if (!(ls >> zp >> current->out_scale)) fail("out_quant wants: zp scale");
            current->out_zero_point = std::uint8_t(zp);
        } else if (key == "bias") {
            if (!current) fail("bias outside a layer");
            std::int64_t v;
            while (ls >> v) current->bias.push_back(v);
        } else if (key == "weights") {
            if (!current) fail("weights outside a layer");
            std::string blob;
            if (!(ls >> blob)) fail("weights wants a hex blob");
            current->weights = hex_decode(blob);
        } else {
            fail("unknown directive: " + key);
        }
    }
    if (!saw_magic) throw std::runtime_error("axnet: missing 'axnet 1' header");
    for (const auto& layer : net.layers) {
        std::size_t want =
            std::size_t(layer.filters) * layer.in_channels * layer.kernel * layer.kernel;
        if (layer.weights.size() != want)
            throw std::runtime_error("axnet: layer " + layer.name + " has " +
                                     std::to_string(layer.weights.size()) + " weights, wants " +
                                     std::to_string(want));
        if (!layer.bias.empty() && int(layer.bias.size()) != layer.filters)
            throw std::runtime_error("axnet: layer " + layer.name + " bias count mismatch");
    }
    return net;
}

QuantNet axnet_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("axnet: cannot open " + path);
    return axnet_parse(in);
}

void axnet_write(const std::string& path, const QuantNet& net) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("axnet: cannot open " + path + " for writing");
    out << "axnet 1\n";
    out << "input " << net.input_channels << " " << net.input_height << " " << net.input_width
        << "\n";
    out << "input_quant " << int(net.input_zero_point) << " " << net.input_scale << "\n";
    for (const auto& layer : net.layers) {
        out << "layer " << (layer.name.empty() ? "conv" : layer.name) << "\n";
        out << "shape " << layer.filters << " " << layer.in_channels << " " << layer.kernel
            << " " << layer.stride << "\n";
        out << "weight_quant " << int(layer.weight_zero_point) << " " << layer.weight_scale
            << "\n";
        out << "out_quant " << int(layer.out_zero_point) << " " << layer.out_scale << "\n";
        if (!layer.bias.empty()) {
            out << "bias";
            for (auto v : layer.bias) out << " " << v;
            out << "\n";
        }
        out << "weights " << hex_encode(layer.weights) << "\n";
    }
    if (!out) throw std::runtime_error("axnet: write failed");
}

Granularity granularity_parse(const std::string& name) {
    if (name == "layer") return Granularity::Layer;
    if (name == "filter") return Granularity::Filter;
    if (name == "kernel-channel") return Granularity::KernelChannel;
    if (name == "kernel-row") return Granularity::KernelRow;
    if (name == "kernel-column") return Granularity::KernelColumn;
    throw std::invalid_argument("unknown granularity: " + name);
}

std::string granularity_name(Granularity g) {
    switch (g) {
        case Granularity::Layer: return "layer";
        case Granularity::Filter: return "filter";
        case Granularity::KernelChannel: return "kernel-channel";
        case Granularity::KernelRow: return "kernel-row";
        case Granularity::KernelColumn: return "kernel-column";
    }
    throw std::logic_error("unhandled granularity");
}

AssignmentScheme AssignmentScheme::uniform(const AxConfig& cfg) {
    AssignmentScheme s;
    s.granularity = Granularity::Layer;
    s.table[-1] = cfg; // -1 is the wildcard entry
    return s;
}

ResolvedAssignment::ResolvedAssignment(const QuantNet& net, const AssignmentScheme& scheme)
    : scheme_(scheme), max_layer_(int(net.layers.size())) {
    if (scheme_.granularity == Granularity::Filter) {
        filter_group_offset_.push_back(0);
        for (const auto& layer : net.layers) {
            int assigned = 0, group = 0;
            for (int size : scheme_.filter_group_sizes) {
                for (int i = 0; i < size && assigned < layer.filters; ++i, ++assigned)
                    filter_group_of_.push_back(group);
                ++group;
            }
            // layers larger than the declared groups spill into a final group
            for (; assigned < layer.filters; ++assigned) filter_group_of_.push_back(group);
            filter_group_offset_.push_back(int(filter_group_of_.size()));
        }
        if (scheme_.filter_group_sizes.empty())
            throw std::invalid_argument("filter granularity needs explicit group sizes");
    }
    // Validate coverage: resolve every unit index that can occur.
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const auto& layer = net.layers[li];
        for (int f = 0; f < layer.filters; ++f)
            for (int c = 0; c < layer.in_channels; ++c)
                for (int r = 0; r < layer.kernel; ++r)
                    for (int col = 0; col < layer.kernel; ++col)
                        config_at(int(li), f, c, r, col);
    }
}

const AxConfig& ResolvedAssignment::config_at(int layer, int filter, int channel, int row,
                                              int col) const {
    int unit = 0;
    switch (scheme_.granularity) {
        case Granularity::Layer: unit = layer; break;
        case Granularity::Filter:
            unit = filter_group_of_[std::size_t(filter_group_offset_[layer]) + filter];
            break;
        case Granularity::KernelChannel: unit = channel; break;
        case Granularity::KernelRow: unit = row; break;
        case Granularity::KernelColumn: unit = col; break;
    }
    auto it = scheme_.table.find(unit);
    if (it == scheme_.table.end()) it = scheme_.table.find(-1); // wildcard
    if (it == scheme_.table.end())
        throw std::out_of_range("assignment scheme does not cover unit " + std::to_string(unit) +
                                " (" + granularity_name(scheme_.granularity) + ")");
    return it->second;
}

namespace {

// 8-bit unsigned operands zero-extend into the 10-bit signed domain.
constexpr int kQuantMultWidth = 10;

} // namespace

QuantTensor conv_forward_quant(const QuantConvLayer& layer, const QuantTensor& input,
                               const ResolvedAssignment& assignment, int layer_index) {
    if (input.channels != layer.in_channels)
        throw std::invalid_argument("conv_forward_quant: channel mismatch");
    if (input.height < layer.kernel || input.width < layer.kernel)
        throw std::invalid_argument("conv_forward_quant: input smaller than kernel");
    const int out_h = (input.height - layer.kernel) / layer.stride + 1;
    const int out_w = (input.width - layer.kernel) / layer.stride + 1;

    QuantTensor out;
    out.channels = layer.filters;
    out.height = out_h;
    out.width = out_w;
    out.zero_point = layer.out_zero_point;
    out.scale = layer.out_scale;
    out.data.assign(std::size_t(layer.filters) * out_h * out_w, 0);

    const double requant = input.scale * layer.weight_scale / layer.out_scale;
    const std::int64_t zx = input.zero_point, zw = layer.weight_zero_point;

    std::vector<FixedOperand> byte_ops;
    byte_ops.reserve(256);
    for (int v = 0; v < 256; ++v) byte_ops.emplace_back(kQuantMultWidth, v);

    for (int f = 0; f < layer.filters; ++f) {
        for (int oy = 0; oy < out_h; ++oy) {
            for (int ox = 0; ox < out_w; ++ox) {
                wide_t acc = 0;
                std::int64_t sum_x = 0, sum_w = 0;
                std::int64_t count = 0;
                for (int c = 0; c < layer.in_channels; ++c) {
                    for (int ky = 0; ky < layer.kernel; ++ky) {
                        for (int kx = 0; kx < layer.kernel; ++kx) {
                            std::uint8_t xv =
                                input.at(c, oy * layer.stride + ky, ox * layer.stride + kx);
                            std::uint8_t wv = layer.weight_at(f, c, ky, kx);
                            const AxConfig& cfg =
                                assignment.config_at(layer_index, f, c, ky, kx);
                            acc += multiply_dispatch(cfg, byte_ops[wv], byte_ops[xv]);
                            sum_x += xv;
                            sum_w += wv;
                            ++count;
                        }
                    }
                }
                // (x - zx) * (w - zw) = x*w - zw*x - zx*w + zx*zw, with only
                // the x*w term going through the approximate circuit.
                acc += -zw * sum_x - zx * sum_w + count * zx * zw;
                if (!layer.bias.empty()) acc += layer.bias[f];
                double scaled = double(std::int64_t(acc)) * requant + double(out.zero_point);
                std::int64_t q = std::llround(scaled);
                if (q < 0) q = 0;
                if (q > 255) q = 255;
                out.at(f, oy, ox) = std::uint8_t(q);
            }
        }
    }
    return out;
}

QuantTensor net_forward(const QuantNet& net, const QuantTensor& input,
                        const ResolvedAssignment& assignment) {
    QuantTensor t = input;
    for (std::size_t li = 0; li < net.layers.size(); ++li)
        t = conv_forward_quant(net.layers[li], t, assignment, int(li));
    return t;
}

EnergyTable EnergyTable::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("energy table: cannot open " + path);
    EnergyTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (cells.size() < 2) continue;
        if (!header_seen) {
            header_seen = true;
            if (cells[0] == "config") continue; // header row
        }
        table.cost[cells[0]] = std::stod(cells[1]);
    }
    if (table.cost.empty()) throw std::runtime_error("energy table: no entries in " + path);
    return table;
}

double EnergyTable::at(const AxConfig& cfg) const {
    auto it = cost.find(cfg.to_string());
    if (it == cost.end())
        throw std::out_of_range("energy table has no entry for " + cfg.to_string());
    return it->second;
}

std::uint64_t layer_mult_count(const QuantConvLayer& layer, int in_h, int in_w) {
    const std::uint64_t out_h = std::uint64_t((in_h - layer.kernel) / layer.stride + 1);
    const std::uint64_t out_w = std::uint64_t((in_w - layer.kernel) / layer.stride + 1);
    return std::uint64_t(layer.filters) * layer.in_channels * layer.kernel * layer.kernel *
           out_h * out_w;
}

EnergyBreakdown estimate_energy(const QuantNet& net, const AssignmentScheme& scheme,
                                const EnergyTable& table) {
    ResolvedAssignment assignment(net, scheme);
    EnergyBreakdown breakdown;
    int h = net.input_height, w = net.input_width;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const auto& layer = net.layers[li];
        const std::uint64_t out_h = std::uint64_t((h - layer.kernel) / layer.stride + 1);
        const std::uint64_t out_w = std::uint64_t((w - layer.kernel) / layer.stride + 1);
        double layer_cost = 0;
        for (int f = 0; f < layer.filters; ++f)
            for (int c = 0; c < layer.in_channels; ++c)
                for (int r = 0; r < layer.kernel; ++r)
                    for (int col = 0; col < layer.kernel; ++col)
                        layer_cost += table.at(assignment.config_at(int(li), f, c, r, col)) *
                                      double(out_h * out_w);
        breakdown.per_layer.emplace_back(layer.name.empty() ? "conv" : layer.name, layer_cost);
        breakdown.total += layer_cost;
        h = int(out_h);
        w = int(out_w);
    }
    return breakdown;
}

} // namespace axmul

// Python bindings for the multiplier models, error metrics, and kernels.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "axmul/dlsb.hpp"
#include "axmul/error_lab.hpp"
#include "axmul/kernels.hpp"
#include "axmul/runs.hpp"

namespace py = pybind11;
using namespace axmul;

namespace {

py::object wide_to_py(wide_t v) {
    return py::reinterpret_steal<py::object>(
        PyLong_FromString(to_string(v).c_str(), nullptr, 10));
}

py::dict report_to_dict(const MetricsReport& m) {
    py::dict d;
    d["mred"] = m.mred;
    py::dict pred;
    for (std::size_t i = 0; i < m.pred.size(); ++i)
        pred[py::float_(m.pred_m_pct[i])] = m.pred[i];
    d["pred"] = pred;
    d["pon"] = m.pon;
    d["pun"] = m.pun;
    d["max_red"] = m.max_red;
    d["samples"] = m.samples;
    d["included"] = m.included;
    d["excluded_zero"] = m.excluded_zero;
    return d;
}

FpDatum datum_from_bits(std::uint64_t bits, const FpFormat& fmt) {
    return FpDatum::from_bits(bits, fmt);
}

py::dict product_to_dict(const FpProduct& p, const FpFormat& fmt) {
    py::dict d;
    d["flag"] = p.flag == FpProduct::Flag::Value
                    ? "value"
                    : (p.flag == FpProduct::Flag::Overflow ? "overflow" : "underflow");
    d["sign"] = p.sign;
    if (p.is_value()) {
        d["bits"] = p.datum.to_bits(fmt);
        d["value"] = fp_decode(p.datum, fmt);
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_axmul, m) {
    m.doc() = "bit-accurate approximate multiplier laboratory";

    py::class_<AxConfig>(m, "AxConfig")
        .def_static("parse", &AxConfig::parse, py::arg("text"))
        .def("__str__", &AxConfig::to_string)
        .def("__repr__",
             [](const AxConfig& c) { return "AxConfig('" + c.to_string() + "')"; })
        .def("__eq__", [](const AxConfig& a, const AxConfig& b) { return a == b; })
        .def("validate", &AxConfig::validate, py::arg("width"));

    m.def(
        "multiply",
        [](const std::string& cfg, int width, std::int64_t a, std::int64_t b) {
            return wide_to_py(multiply_dispatch(AxConfig::parse(cfg), FixedOperand(width, a),
                                                FixedOperand(width, b)));
        },
        py::arg("config"), py::arg("width"), py::arg("a"), py::arg("b"),
        "Multiply through the named configuration; b is the encoded operand.");
    m.def(
        "multiply_accurate",
        [](int width, std::int64_t a, std::int64_t b) {
            return wide_to_py(multiply_accurate(FixedOperand(width, a), FixedOperand(width, b)));
        },
        py::arg("width"), py::arg("a"), py::arg("b"));
    m.def(
        "oracle_multiply",
        [](int width, std::int64_t a, std::int64_t b) {
            return wide_to_py(oracle_multiply(FixedOperand(width, a), FixedOperand(width, b)));
        },
        py::arg("width"), py::arg("a"), py::arg("b"));
    m.def(
        "encode_radix4",
        [](int width, std::int64_t b) {
            std::vector<int> values;
            for (const auto& d : encode_radix4(FixedOperand(width, b)))
                values.push_back(d.value);
            return values;
        },
        py::arg("width"), py::arg("b"));
    m.def(
        "round_operand",
        [](int width, std::int64_t a, int r) { return round_operand(FixedOperand(width, a), r); },
        py::arg("width"), py::arg("a"), py::arg("r"));
    m.def(
        "approx_high_radix_digit",
        [](std::int64_t y, int k) {
            auto d = approx_high_radix_digit(y, k);
            return py::make_tuple(d.approx, d.sign, d.power);
        },
        py::arg("y"), py::arg("k"));

    m.def(
        "dlsb_value",
        [](int width, std::int64_t core, int extra) {
            return dlsb_value(DlsbOperand(FixedOperand(width, core), extra));
        },
        py::arg("width"), py::arg("core"), py::arg("extra"));
    m.def(
        "dlsb_negate",
        [](int width, std::int64_t core, int extra) {
            auto r = dlsb_negate(DlsbOperand(FixedOperand(width, core), extra));
            return py::make_tuple(r.core.value(), r.extra);
        },
        py::arg("width"), py::arg("core"), py::arg("extra"));
    m.def(
        "dlsb_multiply",
        [](int width, std::int64_t ac, int ae, std::int64_t bc, int be) {
            return wide_to_py(dlsb_multiply(DlsbOperand(FixedOperand(width, ac), ae),
                                            DlsbOperand(FixedOperand(width, bc), be)));
        },
        py::arg("width"), py::arg("a_core"), py::arg("a_extra"), py::arg("b_core"),
        py::arg("b_extra"));
    m.def(
        "partition_multiply",
        [](int width, std::int64_t a, std::int64_t b) {
            return wide_to_py(partition_multiply(FixedOperand(width, a), FixedOperand(width, b)));
        },
        py::arg("width"), py::arg("a"), py::arg("b"));

    py::class_<FpFormat>(m, "FpFormat")
        .def_static("half", &FpFormat::half)
        .def_static("single", &FpFormat::single)
        .def_readonly("total_bits", &FpFormat::total_bits)
        .def_readonly("exp_bits", &FpFormat::exp_bits)
        .def_readonly("frac_bits", &FpFormat::frac_bits)
        .def_readonly("bias", &FpFormat::bias);

    m.def(
        "fp_multiply_accurate",
        [](std::uint64_t a, std::uint64_t b, const FpFormat& fmt) {
            return product_to_dict(
                fp_multiply_accurate(datum_from_bits(a, fmt), datum_from_bits(b, fmt), fmt), fmt);
        },
        py::arg("a_bits"), py::arg("b_bits"), py::arg("fmt"));
    m.def(
        "fp_multiply_axfpu",
        [](std::uint64_t a, std::uint64_t b, const FpFormat& fmt, int p, int r) {
            return product_to_dict(
                fp_multiply_axfpu(datum_from_bits(a, fmt), datum_from_bits(b, fmt), fmt, p, r),
                fmt);
        },
        py::arg("a_bits"), py::arg("b_bits"), py::arg("fmt"), py::arg("p"), py::arg("r"));

    m.def(
        "rad_closed_form",
        [](int n, int k, const std::vector<double>& thresholds) {
            return report_to_dict(rad_closed_form(n, k, thresholds));
        },
        py::arg("n"), py::arg("k"), py::arg("thresholds") = std::vector<double>{2.0});
    m.def(
        "sweep",
        [](int width, const std::vector<std::string>& configs, const std::string& sampler,
           std::uint64_t samples, std::uint64_t seed, const std::string& format_name) {
            SweepSpec spec;
            spec.width = width;
            spec.sampler = sampler_parse(sampler);
            spec.samples = samples;
            spec.seed = seed;
            spec.format = format_name == "single" ? FpFormat::single() : FpFormat::half();
            for (const auto& text : configs) spec.configs.push_back(AxConfig::parse(text));
            py::list rows;
            for (const auto& row : run_sweep(spec)) {
                py::dict d = report_to_dict(row.metrics);
                d["config"] = row.config.to_string();
                d["extreme"] = row.extreme;
                rows.append(d);
            }
            return rows;
        },
        py::arg("width"), py::arg("configs"), py::arg("sampler") = "uniform-fixed",
        py::arg("samples") = 200000, py::arg("seed") = 1, py::arg("format") = "half");

    m.def(
        "pareto_front",
        [](const std::vector<std::pair<double, double>>& pts) {
            std::vector<ParetoPoint> points;
            for (std::size_t i = 0; i < pts.size(); ++i)
                points.push_back(ParetoPoint{pts[i].first, pts[i].second, i});
            std::vector<std::size_t> tags;
            for (const auto& p : pareto_front(points)) tags.push_back(p.tag);
            return tags;
        },
        py::arg("points"), "Indices of the non-dominated subset, ordered by error.");

    py::class_<GrayImage>(m, "GrayImage")
        .def(py::init<int, int, std::uint8_t>(), py::arg("width"), py::arg("height"),
             py::arg("fill") = 0)
        .def_readonly("width", &GrayImage::width)
        .def_readonly("height", &GrayImage::height)
        .def("tobytes",
             [](const GrayImage& img) {
                 return py::bytes(reinterpret_cast<const char*>(img.pixels.data()),
                                  img.pixels.size());
             })
        .def("__eq__", [](const GrayImage& a, const GrayImage& b) { return a == b; });

    m.def("make_test_image", &make_test_image, py::arg("width") = 256, py::arg("height") = 256);
    m.def("pgm_read", py::overload_cast<const std::string&>(&pgm_read), py::arg("path"));
    m.def("pgm_write", py::overload_cast<const std::string&, const GrayImage&, bool>(&pgm_write),
          py::arg("path"), py::arg("image"), py::arg("ascii") = false);
    m.def("psnr", &psnr, py::arg("a"), py::arg("b"));
    m.def("ssim", &ssim, py::arg("a"), py::arg("b"));
    m.def(
        "sobel_cer",
        [](const std::string& cfg, std::int64_t threshold) {
            GrayImage img = make_test_image();
            EdgeMap ref = sobel(img, AxConfig::accurate(),
                                threshold >= 0 ? threshold : default_sobel_threshold());
            EdgeMap test = sobel(img, AxConfig::parse(cfg),
                                 threshold >= 0 ? threshold : default_sobel_threshold());
            return cer(test, ref);
        },
        py::arg("config"), py::arg("threshold") = -1,
        "Correct-edge ratio of a configuration on the built-in scene.");
}

#include "axmul/approx.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace axmul {

namespace {

void check_even_k(int k, int n, const char* who) {
    if (k < 4 || k > n - 2 || k % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": k must be even in [4, n-2]");
}

void check_pr(int p, int r, int n, const char* who) {
    if (p < 0 || p >= n / 2 - 1)
        throw std::invalid_argument(std::string(who) + ": P must lie in [0, n/2-1)");
    if (r < 0 || r >= n - 1)
        throw std::invalid_argument(std::string(who) + ": R must lie in [0, n-1)");
}

// Column-truncating rounding reaches across the whole 2n-column matrix.
void check_p_colr(int p, int r, int n, const char* who) {
    if (p < 0 || p >= n / 2 - 1)
        throw std::invalid_argument(std::string(who) + ": P must lie in [0, n/2-1)");
    if (r < 0 || r > 2 * n - 2)
        throw std::invalid_argument(std::string(who) + ": R must lie in [0, 2n-1)");
}

std::int64_t asr(std::int64_t v, int s) { return s == 0 ? v : v >> s; }

int bit_of(std::int64_t v, int i) {
    if (i < 0) return 0;
    return int((std::uint64_t(v) >> i) & 1u);
}

// Drops the bits of v below column r (arithmetic floor).
wide_t truncate_below(wide_t v, int r) {
    if (r <= 0) return v;
    return (v >> r) << r;
}

} // namespace

std::int64_t round_operand(const FixedOperand& a, int r, RoundingConvention conv) {
    if (r < 0 || r >= a.width()) throw std::invalid_argument("rounding amount out of range");
    if (conv == RoundingConvention::DropRMinusOne) r = std::max(r - 1, 0);
    std::int64_t kept = asr(a.value(), r) + bit_of(a.value(), r - 1);
    return kept << r;
}

HighRadixDigit approx_high_radix_digit(std::int64_t y, int k) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("high-radix k must be even, k >= 4");
    const std::int64_t half = std::int64_t(1) << (k - 1);
    if (y < -half || y >= half) throw std::out_of_range("digit outside high-radix range");

    HighRadixDigit d;
    d.accurate = y;
    d.sign = y < 0;

    // Interval table in doubled units so the k=4 half-unit boundaries stay
    // integral: [2^(k-5), 2^(k-4)+2^(k-5)) -> 2^(k-4), and so on. Ties go up.
    const std::int64_t y2 = 2 * y;
    struct Row {
        std::int64_t lo2, hi2, value;
        int power;
    };
    const std::int64_t p1 = std::int64_t(1) << (k - 1); // 2^(k-1)
    const std::int64_t p2 = p1 >> 1, p3 = p1 >> 2, p4 = p1 >> 3;
    const std::int64_t u5 = p1 >> 4 == 0 ? 1 : 2 * (p1 >> 4); // 2*2^(k-5), = 1 when k = 4
    const Row rows[] = {
        {0, u5, 0, -1},
        {u5, 2 * p4 + u5, p4, k - 4},
        {2 * p4 + u5, 2 * (p3 + p4), p3, k - 3},
        {2 * (p3 + p4), 2 * (p2 + p3), p2, k - 2},
        {2 * (p2 + p3), 2 * p1, p1, k - 1},
        {-2 * p1, -2 * (p2 + p3), -p1, k - 1},
        {-2 * (p2 + p3), -2 * (p3 + p4), -p2, k - 2},
        {-2 * (p3 + p4), -(2 * p4 + u5), -p3, k - 3},
        {-(2 * p4 + u5), -u5, -p4, k - 4},
        {-u5, 0, 0, -1},
    };
    for (const Row& row : rows) {
        if (y2 >= row.lo2 && y2 < row.hi2) {
            d.approx = row.value;
            d.power = row.power;
            return d;
        }
    }
    throw std::logic_error("high-radix interval table gap");
}

std::int64_t low_chunk_value(const FixedOperand& b, int k) {
    std::int64_t chunk = 0;
    for (int i = 0; i < k - 1; ++i) chunk += std::int64_t(b.bit(i)) << i;
    chunk -= std::int64_t(b.bit(k - 1)) << (k - 1);
    return chunk;
}

static wide_t rad_encoded_value(const FixedOperand& b, int k) {
    const int n = b.width();
    auto digits = encode_radix4(b);
    wide_t high = 0;
    for (int j = k / 2; j < n / 2; ++j) high += wide_t(digits[j].value) << (2 * j);
    return high + approx_high_radix_digit(low_chunk_value(b, k), k).approx;
}

wide_t multiply_rad(const FixedOperand& a, const FixedOperand& b, int k) {
    if (a.width() != b.width()) throw std::invalid_argument("operand widths differ");
    check_even_k(k, b.width(), "rad");
    return wide_t(a.value()) * rad_encoded_value(b, k);
}

wide_t multiply_axfxu(const FixedOperand& a, const FixedOperand& b, int p, int r,
                      RoundingConvention conv) {
    const int n = a.width();
    if (n != b.width()) throw std::invalid_argument("operand widths differ");
    check_pr(p, r, n, "axfxu");
    const wide_t a_rounded = round_operand(a, r, conv);
    auto digits = encode_radix4(b);
    wide_t product = 0;
    for (int j = p; j < n / 2; ++j)
        product += (a_rounded * digits[j].value) << (2 * j);
    return product;
}

DyFxuMasks dyfxu_masks(int p, int r, int n) {
    check_pr(p, r, n, "dyfxu");
    DyFxuMasks m;
    int zb = std::max(2 * p - 1, 0);
    int za = std::max(r - 1, 0);
    m.keep_b = ~0ULL << zb;
    m.keep_a = ~0ULL << za;
    m.round_bit = r >= 1 ? r - 1 : -1;
    if (n < 64) {
        std::uint64_t width_mask = (1ULL << n) - 1;
        m.keep_a &= width_mask;
        m.keep_b &= width_mask;
    }
    return m;
}

std::pair<int, int> decode_dyfxu_masks(const DyFxuMasks& masks, int n) {
    std::uint64_t width_mask = n == 64 ? ~0ULL : (1ULL << n) - 1;
    auto low_zero_run = [&](std::uint64_t keep) {
        int z = 0;
        while (z < n && ((keep >> z) & 1u) == 0) ++z;
        if ((keep & width_mask) != ((~0ULL << z) & width_mask))
            throw std::invalid_argument("mask is not a canonical low-run form");
        return z;
    };
    int zb = low_zero_run(masks.keep_b);
    int za = low_zero_run(masks.keep_a);
    if (zb % 2 == 0 && zb != 0)
        throw std::invalid_argument("keep_b zero run must have odd length 2P-1");
    int p = zb == 0 ? 0 : (zb + 1) / 2;
    int r;
    if (masks.round_bit < 0) {
        if (za != 0) throw std::invalid_argument("rounding disabled but keep_a masks bits");
        r = 0;
    } else {
        if (masks.round_bit != za)
            throw std::invalid_argument("round bit must sit just above the masked run");
        r = za + 1;
    }
    return {p, r};
}

wide_t multiply_dyfxu(const FixedOperand& a, const FixedOperand& b, const DyFxuMasks& masks) {
    const int n = a.width();
    if (n != b.width()) throw std::invalid_argument("operand widths differ");
    auto [p, r] = decode_dyfxu_masks(masks, n);
    check_pr(p, r, n, "dyfxu");
    return multiply_axfxu(a, b, p, r);
}

std::vector<int> roup2_default_schedule(int p, int r, int n) {
    std::vector<int> schedule;
    for (int j = p; j < n / 2; ++j)
        schedule.push_back(std::max(r - 2 * (j - p), 0));
    return schedule;
}

namespace {

// Shared truncate-and-correct accumulation for ROUP1 and RADR: rows are
// (value, weight_exponent, nonzero-digit) triples; columns below r are cut,
// corrections land on corr_col.
wide_t truncated_matrix_sum(const std::vector<std::tuple<wide_t, int, bool>>& rows, int r,
                            CorrectionColumn col) {
    wide_t sum = 0;
    bool any_truncated = false;
    int corr_col = col == CorrectionColumn::AtRMinusOne ? r - 1 : r;
    for (const auto& [value, shift, live] : rows) {
        wide_t contribution = value << shift;
        if (shift < r) {
            sum += truncate_below(contribution, r);
            if (live) {
                any_truncated = true;
                sum += wide_t(1) << corr_col;
            }
        } else {
            sum += contribution;
        }
    }
    if (any_truncated) sum += wide_t(1) << corr_col;
    return sum;
}

} // namespace

wide_t multiply_roup1(const FixedOperand& a, const FixedOperand& b, int p, int r,
                      CorrectionColumn col) {
    const int n = a.width();
    if (n != b.width()) throw std::invalid_argument("operand widths differ");
    check_p_colr(p, r, n, "roup1");
    auto digits = encode_radix4(b);
    std::vector<std::tuple<wide_t, int, bool>> rows;
    for (int j = p; j < n / 2; ++j)
        rows.emplace_back(wide_t(a.value()) * digits[j].value, 2 * j,
                          digits[j].one || digits[j].two);
    return truncated_matrix_sum(rows, r, col);
}

wide_t multiply_roup2(const FixedOperand& a, const FixedOperand& b, int p, int r,
                      const std::vector<int>* schedule, RoundingConvention conv) {
    const int n = a.width();
    if (n != b.width()) throw std::invalid_argument("operand widths differ");
    check_pr(p, r, n, "roup2");
    std::vector<int> sched = schedule ? *schedule : roup2_default_schedule(p, r, n);
    if (int(sched.size()) != n / 2 - p)
        throw std::invalid_argument("roup2 schedule must cover rows P..n/2-1");
    auto digits = encode_radix4(b);
    wide_t product = 0;
    for (int j = p; j < n / 2; ++j) {
        int rj = sched[j - p];
        if (rj < 0 || rj >= n - 1) throw std::invalid_argument("roup2 schedule entry out of range");
        product += (wide_t(round_operand(a, rj, conv)) * digits[j].value) << (2 * j);
    }
    return product;
}

wide_t multiply_radr(const FixedOperand& a, const FixedOperand& b, int k, int r,
                     CorrectionColumn col) {
    const int n = a.width();
    if (n != b.width()) throw std::invalid_argument("operand widths differ");
    check_even_k(k, n, "radr");
    if (r < 0 || r > 2 * n - 2) throw std::invalid_argument("radr: R must lie in [0, 2n-1)");
    auto digits = encode_radix4(b);
    std::vector<std::tuple<wide_t, int, bool>> rows;
    for (int j = k / 2; j < n / 2; ++j)
        rows.emplace_back(wide_t(a.value()) * digits[j].value, 2 * j,
                          digits[j].one || digits[j].two);
    wide_t truncated = truncated_matrix_sum(rows, r, col);
    wide_t y0 = approx_high_radix_digit(low_chunk_value(b, k), k).approx;
    return truncated + wide_t(a.value()) * y0;
}

wide_t multiply_drad(const FixedOperand& a, const FixedOperand& b, int k, int m,
                     bool perforate) {
    const int n = a.width();
    if (n != b.width()) throw std::invalid_argument("operand widths differ");
    check_even_k(k, n, "drad");
    check_even_k(m, n, "drad");

    // A = A1 + x0 with A1 keeping 2^(m-1) a_{m-1}; B = B1 + y0 on radix-4.
    std::int64_t x0 = low_chunk_value(a, m);
    std::int64_t a1 = a.value() - x0;
    auto digits = encode_radix4(b);
    wide_t b1 = 0;
    for (int j = k / 2; j < n / 2; ++j) b1 += wide_t(digits[j].value) << (2 * j);
    std::int64_t x0_hat = approx_high_radix_digit(x0, m).approx;
    std::int64_t y0_hat = approx_high_radix_digit(low_chunk_value(b, k), k).approx;

    wide_t product = wide_t(a1) * b1 + b1 * x0_hat;
    if (!perforate) product += wide_t(a.value()) * y0_hat;
    return product;
}

AxConfig AxConfig::accurate() { return AxConfig{}; }
AxConfig AxConfig::rad(int k) { return AxConfig{Family::Rad, k, 0, 0, 0, {}}; }
AxConfig AxConfig::perf(int p) { return AxConfig{Family::Perf, 0, 0, p, 0, {}}; }
AxConfig AxConfig::axfxu(int p, int r) { return AxConfig{Family::AxFxu, 0, 0, p, r, {}}; }
AxConfig AxConfig::dyfxu(int p, int r) { return AxConfig{Family::DyFxu, 0, 0, p, r, {}}; }
AxConfig AxConfig::roup1(int p, int r) { return AxConfig{Family::Roup1, 0, 0, p, r, {}}; }
AxConfig AxConfig::roup2(int p, int r, std::optional<std::vector<int>> schedule) {
    return AxConfig{Family::Roup2, 0, 0, p, r, std::move(schedule)};
}
AxConfig AxConfig::radr(int k, int r) { return AxConfig{Family::Radr, k, 0, 0, r, {}}; }
AxConfig AxConfig::drad(int k, int m) { return AxConfig{Family::Drad, k, m, 0, 0, {}}; }
AxConfig AxConfig::dradp(int k, int m) { return AxConfig{Family::Dradp, k, m, 0, 0, {}}; }

namespace {

std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad config parameter: " + item);
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

int to_int(const std::string& s) {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
    return v;
}

std::vector<int> parse_schedule(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) out.push_back(to_int(item));
    return out;
}

} // namespace

AxConfig AxConfig::parse(const std::string& text) {
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);

    AxConfig cfg;
    if (name == "acc") {
        if (!params.empty()) throw std::invalid_argument("acc takes no parameters");
        return cfg;
    }

    int k = -1, m = -1, p = -1, r = -1;
    std::optional<std::vector<int>> schedule;
    for (auto& [key, value] : parse_kv(params)) {
        if (key == "k") k = to_int(value);
        else if (key == "m") m = to_int(value);
        else if (key == "p") p = to_int(value);
        else if (key == "r") r = to_int(value);
        else if (key == "rj") schedule = parse_schedule(value);
        else throw std::invalid_argument("unknown config key: " + key);
    }
    auto need = [&](int v, const char* what) {
        if (v < 0) throw std::invalid_argument(name + " requires " + what);
        return v;
    };
    if (name == "rad") return rad(need(k, "k"));
    if (name == "perf") return perf(need(p, "p"));
    if (name == "axfxu") return axfxu(need(p, "p"), need(r, "r"));
    if (name == "dyfxu") return dyfxu(need(p, "p"), need(r, "r"));
    if (name == "roup1") return roup1(need(p, "p"), need(r, "r"));
    if (name == "roup2") return roup2(need(p, "p"), need(r, "r"), std::move(schedule));
    if (name == "radr") return radr(need(k, "k"), need(r, "r"));
    if (name == "drad") return drad(need(k, "k"), need(m, "m"));
    if (name == "dradp") return dradp(need(k, "k"), need(m, "m"));
    throw std::invalid_argument("unknown multiplier config: " + name);
}

std::string AxConfig::to_string() const {
    std::ostringstream os;
    switch (family) {
        case Family::Accurate: return "acc";
        case Family::Rad: os << "rad:k=" << k; break;
        case Family::Perf: os << "perf:p=" << p; break;
        case Family::AxFxu: os << "axfxu:p=" << p << ",r=" << r; break;
        case Family::DyFxu: os << "dyfxu:p=" << p << ",r=" << r; break;
        case Family::Roup1: os << "roup1:p=" << p << ",r=" << r; break;
        case Family::Roup2:
            os << "roup2:p=" << p << ",r=" << r;
            if (schedule) {
                os << ",rj=";
                for (std::size_t i = 0; i < schedule->size(); ++i)
                    os << (i ? ":" : "") << (*schedule)[i];
            }
            break;
        case Family::Radr: os << "radr:k=" << k << ",r=" << r; break;
        case Family::Drad: os << "drad:k=" << k << ",m=" << m; break;
        case Family::Dradp: os << "dradp:k=" << k << ",m=" << m; break;
    }
    return os.str();
}

void AxConfig::validate(int n) const {
    switch (family) {
        case Family::Accurate: break;
        case Family::Rad: check_even_k(k, n, "rad"); break;
        case Family::Perf: check_pr(p, 0, n, "perf"); break;
        case Family::AxFxu: check_pr(p, r, n, "axfxu"); break;
        case Family::DyFxu: check_pr(p, r, n, "dyfxu"); break;
        case Family::Roup1: check_p_colr(p, r, n, "roup1"); break;
        case Family::Roup2:
            check_pr(p, r, n, "roup2");
            if (schedule && int(schedule->size()) != n / 2 - p)
                throw std::invalid_argument("roup2 schedule must cover rows P..n/2-1");
            break;
        case Family::Radr:
            check_even_k(k, n, "radr");
            if (r < 0 || r > 2 * n - 2) throw std::invalid_argument("radr: R out of range");
            break;
        case Family::Drad:
        case Family::Dradp:
            check_even_k(k, n, family == Family::Drad ? "drad" : "dradp");
            check_even_k(m, n, family == Family::Drad ? "drad" : "dradp");
            break;
    }
}

bool AxConfig::extreme(int n) const {
    bool has_pr = family == Family::AxFxu || family == Family::DyFxu ||
                  family == Family::Roup1 || family == Family::Roup2;
    return has_pr && p == n / 2 - 2 && r >= n - 4;
}

bool AxConfig::operator==(const AxConfig& o) const {
    return family == o.family && k == o.k && m == o.m && p == o.p && r == o.r &&
           schedule == o.schedule;
}

wide_t multiply_dispatch(const AxConfig& cfg, const FixedOperand& a, const FixedOperand& b,
                         RoundingConvention conv) {
    cfg.validate(a.width());
    switch (cfg.family) {
        case AxConfig::Family::Accurate: return multiply_accurate(a, b);
        case AxConfig::Family::Rad: return multiply_rad(a, b, cfg.k);
        case AxConfig::Family::Perf: return multiply_axfxu(a, b, cfg.p, 0, conv);
        case AxConfig::Family::AxFxu: return multiply_axfxu(a, b, cfg.p, cfg.r, conv);
        case AxConfig::Family::DyFxu:
            return multiply_dyfxu(a, b, dyfxu_masks(cfg.p, cfg.r, a.width()));
        case AxConfig::Family::Roup1: return multiply_roup1(a, b, cfg.p, cfg.r);
        case AxConfig::Family::Roup2:
            return multiply_roup2(a, b, cfg.p, cfg.r,
                                  cfg.schedule ? &*cfg.schedule : nullptr, conv);
        case AxConfig::Family::Radr: return multiply_radr(a, b, cfg.k, cfg.r);
        case AxConfig::Family::Drad: return multiply_drad(a, b, cfg.k, cfg.m, false);
        case AxConfig::Family::Dradp: return multiply_drad(a, b, cfg.k, cfg.m, true);
    }
    throw std::logic_error("unhandled multiplier family");
}

} // namespace axmul

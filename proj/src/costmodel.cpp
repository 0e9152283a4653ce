#include "hetnas/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hetnas/cimsim.hpp"
#include "hetnas/errors.hpp"

namespace hetnas::costmodel {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

double SaturatingCurve::rate_at(double workload) const {
    if (kind == Kind::Hyperbolic) {
        if (workload <= 0.0) return 0.0;
        return peak * workload / (workload + half_point);
    }
    // Piecewise-linear lookup, clamped at both ends.
    if (workload <= table.front().first) return table.front().second;
    if (workload >= table.back().first) return table.back().second;
    auto hi = std::upper_bound(table.begin(), table.end(), workload,
                               [](double x, const auto& p) { return x < p.first; });
    auto lo = hi - 1;
    const double t = (workload - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double SaturatingCurve::max_rate() const {
    if (kind == Kind::Hyperbolic) return peak;
    double m = 0.0;
    for (const auto& [x, y] : table) m = std::max(m, y);
    return m;
}

bool DeviceProfile::supports(LayerKind kind) const {
    if (kind == LayerKind::Elementwise) return true;
    return curves.count(kind) > 0;
}

bool CimConfig::supports(LayerKind kind) const {
    switch (kind) {
        case LayerKind::AttentionQKVGen:
        case LayerKind::MLPLinear:
            kind = LayerKind::FullyConnected;
            break;
        case LayerKind::AttentionScore:
        case LayerKind::AttentionContext:
        case LayerKind::Elementwise:
            return false;
        default:
            break;
    }
    return supported.count(kind) > 0;
}

// ---------------------------------------------------------------------------
// JSON ingestion
// ---------------------------------------------------------------------------

namespace {

const LayerKind kCurveKinds[] = {
    LayerKind::Conv2d,          LayerKind::DepthwiseConv2d,
    LayerKind::PointwiseConv2d, LayerKind::FullyConnected,
    LayerKind::AttentionQKVGen, LayerKind::AttentionScore,
    LayerKind::AttentionContext, LayerKind::MLPLinear,
};

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ParseError("unknown key '" + it.key() + "' in " + where);
    }
}

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ParseError("missing key '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number())
        throw ParseError("key '" + std::string(key) + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? obj[key].get<double>() : fallback;
}

SaturatingCurve parse_curve(const json& j, const std::string& where) {
    SaturatingCurve c;
    if (!j.is_object()) throw ParseError(where + " must be an object");
    if (j.contains("table")) {
        check_keys(j, {"table", "floor"}, where);
        c.kind = SaturatingCurve::Kind::Table;
        c.floor = number_or(j, "floor", 0.0);
        for (const auto& row : j["table"]) {
            if (!row.is_array() || row.size() != 2)
                throw ParseError(where + ".table rows must be [workload, rate]");
            c.table.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        if (c.table.size() < 2)
            throw ParseError(where + ".table needs at least 2 points");
        for (size_t i = 0; i < c.table.size(); ++i) {
            if (c.table[i].second <= 0.0)
                throw NonPositivePeak(where + ".table[" + std::to_string(i) + "]");
            if (i > 0 && c.table[i].first <= c.table[i - 1].first)
                throw ParseError(where + ".table workloads must be ascending");
        }
    } else {
        check_keys(j, {"peak", "half_point", "floor"}, where);
        c.kind = SaturatingCurve::Kind::Hyperbolic;
        c.peak = require_number(j, "peak", where);
        c.half_point = number_or(j, "half_point", 0.0);
        c.floor = number_or(j, "floor", 0.0);
        if (c.peak <= 0.0) throw NonPositivePeak(where + ".peak");
        if (c.half_point < 0.0) throw ParseError(where + ".half_point must be >= 0");
    }
    if (c.floor < 0.0) throw ParseError(where + ".floor must be >= 0");
    return c;
}

json curve_to_json(const SaturatingCurve& c) {
    json j;
    if (c.kind == SaturatingCurve::Kind::Hyperbolic) {
        j["peak"] = c.peak;
        j["half_point"] = c.half_point;
        j["floor"] = c.floor;
    } else {
        j["table"] = json::array();
        for (const auto& [x, y] : c.table) j["table"].push_back({x, y});
        j["floor"] = c.floor;
    }
    return j;
}

DeviceProfile parse_profile_object(const json& j, const std::string& where) {
    check_keys(j,
               {"name", "clock_hz", "elementwise_cycles_per_element",
                "elementwise_nj_per_element", "curves"},
               where);
    DeviceProfile p;
    p.name = j.contains("name") ? j["name"].get<std::string>() : "npu";
    p.clock_hz = require_number(j, "clock_hz", where);
    if (p.clock_hz <= 0.0) throw ParseError(where + ".clock_hz must be positive");
    p.elementwise_cycles_per_element =
        number_or(j, "elementwise_cycles_per_element", 0.0);
    p.elementwise_nj_per_element = number_or(j, "elementwise_nj_per_element", 0.0);

    if (!j.contains("curves") || !j["curves"].is_object())
        throw ParseError(where + " needs a 'curves' object");
    const json& curves = j["curves"];
    for (auto it = curves.begin(); it != curves.end(); ++it) {
        bool known = false;
        for (LayerKind k : kCurveKinds)
            if (it.key() == netir::to_string(k)) known = true;
        if (!known)
            throw ParseError("unknown layer kind '" + it.key() + "' in " + where + ".curves");
    }
    for (LayerKind k : kCurveKinds) {
        const char* name = netir::to_string(k);
        if (!curves.contains(name)) throw MissingKind(name);
        const json& entry = curves[name];
        if (entry.is_string()) {
            if (entry.get<std::string>() != "unsupported")
                throw ParseError(where + ".curves." + name +
                                 ": string entries must be \"unsupported\"");
            continue;
        }
        const std::string base = where + ".curves." + name;
        check_keys(entry, {"throughput", "energy_efficiency"}, base);
        if (!entry.contains("throughput") || !entry.contains("energy_efficiency"))
            throw ParseError(base + " needs 'throughput' and 'energy_efficiency'");
        CurvePair pair;
        pair.throughput = parse_curve(entry["throughput"], base + ".throughput");
        pair.energy_efficiency =
            parse_curve(entry["energy_efficiency"], base + ".energy_efficiency");
        p.curves.emplace(k, std::move(pair));
    }
    return p;
}

json profile_to_json(const DeviceProfile& p) {
    json j;
    j["name"] = p.name;
    j["clock_hz"] = p.clock_hz;
    j["elementwise_cycles_per_element"] = p.elementwise_cycles_per_element;
    j["elementwise_nj_per_element"] = p.elementwise_nj_per_element;
    json curves;
    for (LayerKind k : kCurveKinds) {
        const char* name = netir::to_string(k);
        auto it = p.curves.find(k);
        if (it == p.curves.end()) {
            curves[name] = "unsupported";
        } else {
            json entry;
            entry["throughput"] = curve_to_json(it->second.throughput);
            entry["energy_efficiency"] = curve_to_json(it->second.energy_efficiency);
            curves[name] = entry;
        }
    }
    j["curves"] = curves;
    return j;
}

CimConfig parse_cim_object(const json& j, const std::string& where) {
    check_keys(j,
               {"n_macros", "cus_per_macro", "capacity_bits_per_macro",
                "products_per_access", "accums_per_access", "access_latency_cycles",
                "access_energy_nj", "clock_hz", "supported", "energy_split"},
               where);
    CimConfig c;
    c.n_macros = static_cast<int>(require_number(j, "n_macros", where));
    if (c.n_macros < 0) throw ParseError(where + ".n_macros must be >= 0");
    c.cus_per_macro = static_cast<int>(number_or(j, "cus_per_macro", 1));
    if (c.cus_per_macro < 1) throw ParseError(where + ".cus_per_macro must be >= 1");
    c.capacity_bits_per_macro =
        static_cast<uint64_t>(number_or(j, "capacity_bits_per_macro",
                                        static_cast<double>(10ull << 20)));
    if (c.capacity_bits_per_macro == 0)
        throw ParseError(where + ".capacity_bits_per_macro must be positive");
    c.products_per_access = static_cast<int>(number_or(j, "products_per_access", 9));
    c.accums_per_access = static_cast<int>(number_or(j, "accums_per_access", 16));
    if (c.products_per_access < 1 || c.accums_per_access < 1)
        throw ParseError(where + ": access tiling dims must be >= 1");
    c.access_latency_cycles = require_number(j, "access_latency_cycles", where);
    if (c.access_latency_cycles <= 0.0)
        throw ParseError(where + ".access_latency_cycles must be positive");
    c.access_energy_nj = require_number(j, "access_energy_nj", where);
    if (c.access_energy_nj < 0.0)
        throw ParseError(where + ".access_energy_nj must be >= 0");
    c.clock_hz = require_number(j, "clock_hz", where);
    if (c.clock_hz <= 0.0) throw ParseError(where + ".clock_hz must be positive");

    if (j.contains("supported")) {
        c.supported.clear();
        for (const auto& name : j["supported"])
            c.supported.insert(netir::layer_kind_from_string(name.get<std::string>()));
    }
    if (j.contains("energy_split")) {
        const json& s = j["energy_split"];
        check_keys(s, {"input_transfer", "compute", "weight_read"},
                   where + ".energy_split");
        c.energy_split.input_transfer = require_number(s, "input_transfer", where);
        c.energy_split.compute = require_number(s, "compute", where);
        c.energy_split.weight_read = require_number(s, "weight_read", where);
        const EnergySplit& e = c.energy_split;
        if (e.input_transfer < 0 || e.compute < 0 || e.weight_read < 0)
            throw ParseError(where + ".energy_split parts must be >= 0");
        if (std::abs(e.input_transfer + e.compute + e.weight_read - 1.0) > 1e-9)
            throw ParseError(where + ".energy_split must sum to 1");
    }
    return c;
}

json cim_to_json(const CimConfig& c) {
    json j;
    j["n_macros"] = c.n_macros;
    j["cus_per_macro"] = c.cus_per_macro;
    j["capacity_bits_per_macro"] = c.capacity_bits_per_macro;
    j["products_per_access"] = c.products_per_access;
    j["accums_per_access"] = c.accums_per_access;
    j["access_latency_cycles"] = c.access_latency_cycles;
    j["access_energy_nj"] = c.access_energy_nj;
    j["clock_hz"] = c.clock_hz;
    json supported = json::array();
    for (LayerKind k : c.supported) supported.push_back(netir::to_string(k));
    j["supported"] = supported;
    j["energy_split"] = {{"input_transfer", c.energy_split.input_transfer},
                         {"compute", c.energy_split.compute},
                         {"weight_read", c.energy_split.weight_read}};
    return j;
}

const json kExpectedUnits = {{"time", "seconds"},
                             {"energy", "nanojoules"},
                             {"throughput", "macs_per_cycle"},
                             {"energy_efficiency", "macs_per_nanojoule"}};

void check_units(const json& doc, const std::string& where) {
    if (!doc.contains("units"))
        throw ParseError(where + " needs a 'units' header block");
    const json& u = doc["units"];
    check_keys(u, {"time", "energy", "throughput", "energy_efficiency"}, "units");
    for (auto it = kExpectedUnits.begin(); it != kExpectedUnits.end(); ++it) {
        if (!u.contains(it.key()) || u[it.key()] != it.value())
            throw ParseError("units." + it.key() + " must be \"" +
                             it.value().get<std::string>() + "\"");
    }
}

json parse_text(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("document is not valid JSON");
    return doc;
}

}  // namespace

DeviceProfile load_profile(const std::string& json_text) {
    json doc = parse_text(json_text);
    check_keys(doc,
               {"units", "name", "clock_hz", "elementwise_cycles_per_element",
                "elementwise_nj_per_element", "curves"},
               "profile");
    check_units(doc, "profile");
    json body = doc;
    body.erase("units");
    return parse_profile_object(body, "profile");
}

std::string save_profile(const DeviceProfile& profile) {
    json doc;
    doc["units"] = kExpectedUnits;
    json body = profile_to_json(profile);
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    return doc.dump(2) + "\n";
}

HardwareConfig load_hw(const std::string& json_text) {
    json doc = parse_text(json_text);
    check_keys(doc,
               {"units", "npu", "cim", "transfer_latency_s_per_byte",
                "transfer_energy_nj_per_byte"},
               "hardware");
    check_units(doc, "hardware");
    if (!doc.contains("npu")) throw ParseError("hardware needs an 'npu' section");
    if (!doc.contains("cim")) throw ParseError("hardware needs a 'cim' section");
    HardwareConfig hw;
    hw.npu = parse_profile_object(doc["npu"], "npu");
    hw.cim = parse_cim_object(doc["cim"], "cim");
    hw.transfer_latency_s_per_byte = number_or(doc, "transfer_latency_s_per_byte", 0.0);
    hw.transfer_energy_nj_per_byte = number_or(doc, "transfer_energy_nj_per_byte", 0.0);
    if (hw.transfer_latency_s_per_byte < 0 || hw.transfer_energy_nj_per_byte < 0)
        throw ParseError("transfer taxes must be >= 0");
    return hw;
}

std::string save_hw(const HardwareConfig& hw) {
    json doc;
    doc["units"] = kExpectedUnits;
    doc["npu"] = profile_to_json(hw.npu);
    doc["cim"] = cim_to_json(hw.cim);
    doc["transfer_latency_s_per_byte"] = hw.transfer_latency_s_per_byte;
    doc["transfer_energy_nj_per_byte"] = hw.transfer_energy_nj_per_byte;
    return doc.dump(2) + "\n";
}

HardwareConfig load_hw_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open hardware file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_hw(ss.str());
}

// ---------------------------------------------------------------------------
// Curve fitting
// ---------------------------------------------------------------------------

FitReport fit_curve(const std::vector<std::pair<double, double>>& samples,
                    double flag_threshold) {
    if (samples.size() < 3)
        throw ValidationError("fit_curve needs at least 3 samples");
    bool all_equal = true;
    for (const auto& [x, y] : samples) {
        if (x <= 0.0) throw ValidationError("workloads must be positive");
        if (y <= 0.0) throw ValidationError("rates must be positive");
        if (x != samples.front().first) all_equal = false;
    }
    if (all_equal) throw DegenerateSamples("all sample workloads are equal");

    // 1/y = 1/peak + (half/peak)/x is linear in 1/x; weight by 1/v^2 so the
    // linear residual approximates relative error in y.
    double sw = 0, su = 0, sv = 0, suu = 0, suv = 0;
    for (const auto& [x, y] : samples) {
        const double u = 1.0 / x, v = 1.0 / y, w = 1.0 / (v * v);
        sw += w;
        su += w * u;
        sv += w * v;
        suu += w * u * u;
        suv += w * u * v;
    }
    const double det = sw * suu - su * su;
    double peak, half;
    if (std::abs(det) > 1e-30) {
        const double a = (suu * sv - su * suv) / det;
        const double b = (sw * suv - su * sv) / det;
        if (a > 0.0 && b >= 0.0) {
            peak = 1.0 / a;
            half = b / a;
        } else if (a > 0.0) {
            peak = 1.0 / a;
            half = 0.0;
        } else {
            peak = 0.0;
            half = 0.0;
        }
    } else {
        peak = 0.0;
        half = 0.0;
    }
    if (peak <= 0.0) {
        double inv = 0, inv2 = 0;
        for (const auto& [x, y] : samples) {
            inv += 1.0 / y;
            inv2 += 1.0 / (y * y);
        }
        peak = inv / inv2;  // flat-curve optimum under relative error
        half = 0.0;
    }

    // Gauss-Newton refinement of the true relative-error objective.
    auto objective = [&](double p, double h) {
        double s = 0;
        for (const auto& [x, y] : samples) {
            const double r = (p * x / (x + h) - y) / y;
            s += r * r;
        }
        return s;
    };
    double best = objective(peak, half);
    for (int iter = 0; iter < 100; ++iter) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (const auto& [x, y] : samples) {
            const double d = x + half;
            const double r = (peak * x / d - y) / y;
            const double jp = x / (d * y);
            const double jh = -peak * x / (d * d * y);
            jtj00 += jp * jp;
            jtj01 += jp * jh;
            jtj11 += jh * jh;
            jtr0 += jp * r;
            jtr1 += jh * r;
        }
        const double gdet = jtj00 * jtj11 - jtj01 * jtj01;
        double dp, dh;
        if (std::abs(gdet) < 1e-30) {
            dp = jtj00 > 0 ? -jtr0 / jtj00 : 0.0;
            dh = 0.0;
        } else {
            dp = -(jtj11 * jtr0 - jtj01 * jtr1) / gdet;
            dh = -(jtj00 * jtr1 - jtj01 * jtr0) / gdet;
        }
        double step = 1.0;
        bool improved = false;
        for (int backtrack = 0; backtrack < 20; ++backtrack) {
            const double p2 = peak + step * dp;
            const double h2 = std::max(0.0, half + step * dh);
            if (p2 > 0.0) {
                const double obj = objective(p2, h2);
                if (obj < best) {
                    peak = p2;
                    half = h2;
                    best = obj;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!improved) break;
    }

    FitReport report;
    report.curve.kind = SaturatingCurve::Kind::Hyperbolic;
    report.curve.peak = peak;
    report.curve.half_point = half;
    report.curve.floor = 0.0;  // rate samples carry no invocation overhead
    report.flag_threshold = flag_threshold;
    double sum = 0;
    for (const auto& [x, y] : samples) {
        const double rel = std::abs(report.curve.rate_at(x) - y) / y;
        report.max_rel_residual = std::max(report.max_rel_residual, rel);
        sum += rel;
    }
    report.mean_rel_residual = sum / static_cast<double>(samples.size());
    report.flagged = report.max_rel_residual > flag_threshold;
    return report;
}

// ---------------------------------------------------------------------------
// NPU costs
// ---------------------------------------------------------------------------

namespace {

const CurvePair& curve_for(const LayerSpec& layer, const DeviceProfile& profile) {
    auto it = profile.curves.find(layer.kind);
    if (it == profile.curves.end())
        throw UnsupportedKind(std::string(netir::to_string(layer.kind)) +
                              " is not supported by profile " + profile.name);
    return it->second;
}

uint64_t element_count(const LayerSpec& layer) {
    return static_cast<uint64_t>(layer.out_h()) * layer.out_w() * layer.out_ch;
}

}  // namespace

double npu_latency(const LayerSpec& layer, const DeviceProfile& profile) {
    if (layer.kind == LayerKind::Elementwise)
        return static_cast<double>(element_count(layer)) *
               profile.elementwise_cycles_per_element / profile.clock_hz;
    const CurvePair& pair = curve_for(layer, profile);
    const double macs = static_cast<double>(netir::count_macs(layer));
    if (macs == 0.0) return pair.throughput.floor / profile.clock_hz;
    const double cycles = pair.throughput.floor + macs / pair.throughput.rate_at(macs);
    return cycles / profile.clock_hz;
}

double npu_energy(const LayerSpec& layer, const DeviceProfile& profile) {
    if (layer.kind == LayerKind::Elementwise)
        return static_cast<double>(element_count(layer)) *
               profile.elementwise_nj_per_element;
    const CurvePair& pair = curve_for(layer, profile);
    const double macs = static_cast<double>(netir::count_macs(layer));
    if (macs == 0.0) return pair.energy_efficiency.floor;
    return pair.energy_efficiency.floor + macs / pair.energy_efficiency.rate_at(macs);
}

// ---------------------------------------------------------------------------
// CIM costs
// ---------------------------------------------------------------------------

namespace {

uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

void require_cim_runnable(const LayerSpec& slice, const CimConfig& cim) {
    if (!cim.supports(slice.kind))
        throw UnsupportedKind(std::string(netir::to_string(slice.kind)) +
                              " is not supported by the CIM configuration");
    if (cim.n_macros < 1)
        throw UnsupportedKind("CIM system has no macros");
}

}  // namespace

uint64_t cim_accesses(const LayerSpec& slice, const CimConfig& cim) {
    require_cim_runnable(slice, cim);
    const uint64_t products = cim.products_per_access;
    const uint64_t accums = cim.accums_per_access;
    uint64_t positions, out_extent, taps;
    switch (slice.kind) {
        case LayerKind::DepthwiseConv2d:
            positions = static_cast<uint64_t>(slice.out_h()) * slice.out_w();
            out_extent = slice.out_ch;
            taps = static_cast<uint64_t>(slice.kh) * slice.kw;
            break;
        case LayerKind::PointwiseConv2d:
        case LayerKind::FullyConnected:
            positions = static_cast<uint64_t>(slice.out_h()) * slice.out_w();
            out_extent = slice.out_ch;
            taps = slice.in_ch;
            break;
        case LayerKind::AttentionQKVGen:
        case LayerKind::MLPLinear:
            positions = static_cast<uint64_t>(slice.h) * slice.w;
            out_extent = slice.out_ch;
            taps = slice.in_ch;
            break;
        case LayerKind::Conv2d:
            positions = static_cast<uint64_t>(slice.out_h()) * slice.out_w();
            out_extent = slice.out_ch;
            taps = static_cast<uint64_t>(slice.in_ch) * slice.kh * slice.kw;
            break;
        default:
            throw UnsupportedKind("no CIM access mapping for layer kind");
    }
    return positions * ceil_div(out_extent, accums) * ceil_div(taps, products);
}

double cim_latency(const LayerSpec& slice, const CimConfig& cim) {
    require_cim_runnable(slice, cim);
    const uint64_t bits = netir::count_params(slice) * 8;
    if (bits > cim.total_capacity_bits())
        throw CapacityExceeded("slice weights exceed CIM capacity");
    const double accesses = static_cast<double>(cim_accesses(slice, cim));
    // Single division keeps latency(k*n) == latency(n)/k bitwise for
    // power-of-two k.
    return accesses * cim.access_latency_cycles /
           (static_cast<double>(cim.n_macros) * cim.cus_per_macro * cim.clock_hz);
}

double cim_energy(const LayerSpec& slice, const CimConfig& cim) {
    require_cim_runnable(slice, cim);
    const double accesses = static_cast<double>(cim_accesses(slice, cim));
    const double dedup = cimsim::dedup_traffic_factor(slice, cim.cus_per_macro);
    const EnergySplit& s = cim.energy_split;
    const double per_access =
        cim.access_energy_nj *
        (s.input_transfer * dedup + s.compute + s.weight_read);
    return accesses * per_access;
}

double cim_utilization(const LayerSpec& slice, const CimConfig& cim) {
    const double macs = static_cast<double>(netir::count_macs(slice));
    const double accesses = static_cast<double>(cim_accesses(slice, cim));
    return macs / (accesses * cim.macs_per_access());
}

OccupancyReport weights_fit(const std::vector<LayerSpec>& assigned_slices,
                            const CimConfig& cim) {
    OccupancyReport report;
    for (const LayerSpec& slice : assigned_slices)
        report.total_bits += netir::count_params(slice) * 8;
    report.capacity_bits = cim.total_capacity_bits();
    report.fits = report.total_bits <= report.capacity_bits;
    report.per_macro_bits.assign(std::max(cim.n_macros, 0), 0);
    uint64_t remaining = report.total_bits;
    for (int i = 0; i < cim.n_macros && remaining > 0; ++i) {
        const uint64_t take = std::min(remaining, cim.capacity_bits_per_macro);
        report.per_macro_bits[i] = take;
        remaining -= take;
    }
    return report;
}

}  // namespace hetnas::costmodel

#include "hetnas/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hetnas/errors.hpp"

namespace hetnas::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Utilities
// ---------------------------------------------------------------------------

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex_digest(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
        if (!out.good()) throw Error("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += "\"";
    return quoted;
}

std::string format_double(double v) {
    return json(v).dump();  // shortest round-trip form
}

// ---------------------------------------------------------------------------
// Spaces
// ---------------------------------------------------------------------------

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ParseError("unknown key '" + it.key() + "' in " + where);
    }
}

json parse_text(const std::string& text, const std::string& what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(what + " is not valid JSON");
    return doc;
}

netir::BlockKind block_kind_from_string(const std::string& name) {
    if (name == "PlainConv") return netir::BlockKind::PlainConv;
    if (name == "MBConv") return netir::BlockKind::MBConv;
    if (name == "ViT") return netir::BlockKind::ViT;
    if (name == "MBPool") return netir::BlockKind::MBPool;
    throw ParseError("unknown block kind: " + name);
}

}  // namespace

std::string space_to_json(const netir::SearchSpace& space) {
    json doc;
    doc["blocks"] = json::array();
    for (const netir::BlockSpec& b : space.blocks) {
        json jb;
        jb["name"] = b.name;
        jb["kind"] = netir::to_string(b.kind);
        jb["width"] = {{"min", b.width.lo}, {"max", b.width.hi}, {"step", b.width.step}};
        jb["depth"] = {{"min", b.depth.lo}, {"max", b.depth.hi}};
        jb["exp"] = {{"min", b.exp.lo}, {"max", b.exp.hi}, {"step", b.exp.step}};
        jb["stride"] = b.stride;
        doc["blocks"].push_back(jb);
    }
    doc["resolutions"] = space.resolutions;
    return doc.dump(2) + "\n";
}

netir::SearchSpace space_from_json(const std::string& text) {
    json doc = parse_text(text, "space document");
    check_keys(doc, {"blocks", "resolutions"}, "space");
    if (!doc.contains("blocks") || !doc["blocks"].is_array())
        throw ParseError("space needs a 'blocks' array");
    if (!doc.contains("resolutions") || !doc["resolutions"].is_array())
        throw ParseError("space needs a 'resolutions' array");

    netir::SearchSpace space;
    for (const json& jb : doc["blocks"]) {
        check_keys(jb, {"name", "kind", "width", "depth", "exp", "stride"}, "block");
        netir::BlockSpec b;
        if (!jb.contains("name")) throw ParseError("block needs a 'name'");
        b.name = jb["name"].get<std::string>();
        if (!jb.contains("kind")) throw ParseError(b.name + ": block needs a 'kind'");
        b.kind = block_kind_from_string(jb["kind"].get<std::string>());
        if (!jb.contains("width")) throw ParseError(b.name + ": block needs 'width'");
        const json& w = jb["width"];
        check_keys(w, {"min", "max", "step"}, b.name + ".width");
        b.width = {w["min"].get<int>(), w["max"].get<int>(),
                   w.contains("step") ? w["step"].get<int>() : 8};
        if (!jb.contains("depth")) throw ParseError(b.name + ": block needs 'depth'");
        const json& d = jb["depth"];
        check_keys(d, {"min", "max"}, b.name + ".depth");
        b.depth = {d["min"].get<int>(), d["max"].get<int>(), 1};
        if (jb.contains("exp")) {
            const json& e = jb["exp"];
            check_keys(e, {"min", "max", "step"}, b.name + ".exp");
            b.exp = {e["min"].get<double>(), e["max"].get<double>(),
                     e.contains("step") ? e["step"].get<double>() : 1.0};
        } else {
            b.exp = {1.0, 1.0, 1.0};
        }
        b.stride = jb.contains("stride") ? jb["stride"].get<int>() : 1;
        space.blocks.push_back(std::move(b));
    }
    for (const json& r : doc["resolutions"])
        space.resolutions.push_back(r.get<int>());

    netir::require_valid_space(space);
    return space;
}

// ---------------------------------------------------------------------------
// Choices
// ---------------------------------------------------------------------------

std::string choice_to_json(const netir::SubnetChoice& choice,
                           const netir::SearchSpace& space) {
    json doc;
    doc["resolution"] = choice.resolution;
    doc["blocks"] = json::array();
    for (size_t i = 0; i < choice.blocks.size(); ++i) {
        json jb;
        jb["name"] = i < space.blocks.size() ? space.blocks[i].name : "?";
        jb["width"] = choice.blocks[i].width;
        jb["depth"] = choice.blocks[i].depth;
        jb["exp"] = choice.blocks[i].exp;
        doc["blocks"].push_back(jb);
    }
    return doc.dump(2) + "\n";
}

netir::SubnetChoice choice_from_json(const std::string& text,
                                     const netir::SearchSpace& space) {
    json doc = parse_text(text, "choice document");
    check_keys(doc, {"resolution", "blocks"}, "choice");
    if (!doc.contains("resolution") || !doc.contains("blocks"))
        throw ParseError("choice needs 'resolution' and 'blocks'");
    netir::SubnetChoice c;
    c.resolution = doc["resolution"].get<int>();
    size_t i = 0;
    for (const json& jb : doc["blocks"]) {
        check_keys(jb, {"name", "width", "depth", "exp"}, "choice block");
        if (jb.contains("name") && i < space.blocks.size() &&
            jb["name"].get<std::string>() != space.blocks[i].name)
            throw ParseError("choice block " + std::to_string(i) + " is named '" +
                             jb["name"].get<std::string>() + "', space has '" +
                             space.blocks[i].name + "'");
        netir::BlockChoice bc;
        bc.width = jb["width"].get<int>();
        bc.depth = jb["depth"].get<int>();
        bc.exp = jb.contains("exp") ? jb["exp"].get<double>() : 1.0;
        c.blocks.push_back(bc);
        ++i;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Networks
// ---------------------------------------------------------------------------

std::string network_to_json(const netir::Network& net) {
    json doc;
    doc["layers"] = json::array();
    for (const netir::LayerSpec& l : net.layers) {
        json jl;
        jl["kind"] = netir::to_string(l.kind);
        jl["h"] = l.h;
        jl["w"] = l.w;
        jl["in_ch"] = l.in_ch;
        jl["out_ch"] = l.out_ch;
        jl["kh"] = l.kh;
        jl["kw"] = l.kw;
        jl["stride"] = l.stride;
        jl["heads"] = l.heads;
        jl["head_dim"] = l.head_dim;
        doc["layers"].push_back(jl);
    }
    doc["residuals"] = json::array();
    for (const auto& [from, to] : net.residuals)
        doc["residuals"].push_back({from, to});
    return doc.dump(2) + "\n";
}

netir::Network network_from_json(const std::string& text) {
    json doc = parse_text(text, "network document");
    check_keys(doc, {"layers", "residuals"}, "network");
    if (!doc.contains("layers")) throw ParseError("network needs a 'layers' array");
    netir::Network net;
    for (const json& jl : doc["layers"]) {
        check_keys(jl,
                   {"kind", "h", "w", "in_ch", "out_ch", "kh", "kw", "stride",
                    "heads", "head_dim"},
                   "layer");
        netir::LayerSpec l;
        l.kind = netir::layer_kind_from_string(jl["kind"].get<std::string>());
        l.h = jl["h"].get<int>();
        l.w = jl["w"].get<int>();
        l.in_ch = jl["in_ch"].get<int>();
        l.out_ch = jl["out_ch"].get<int>();
        l.kh = jl.contains("kh") ? jl["kh"].get<int>() : 1;
        l.kw = jl.contains("kw") ? jl["kw"].get<int>() : 1;
        l.stride = jl.contains("stride") ? jl["stride"].get<int>() : 1;
        l.heads = jl.contains("heads") ? jl["heads"].get<int>() : 0;
        l.head_dim = jl.contains("head_dim") ? jl["head_dim"].get<int>() : netir::kHeadDim;
        if (l.h < 1 || l.w < 1 || l.in_ch < 1 || l.out_ch < 1 || l.stride < 1)
            throw ParseError("layer has non-positive dimensions");
        net.layers.push_back(l);
    }
    if (doc.contains("residuals"))
        for (const json& e : doc["residuals"])
            net.residuals.emplace_back(e[0].get<int>(), e[1].get<int>());
    auto bad = netir::chain_violations(net);
    if (!bad.empty()) throw ValidationError("network does not chain: " + bad.front());
    return net;
}

// ---------------------------------------------------------------------------
// Schedules and reports
// ---------------------------------------------------------------------------

std::string schedule_to_json(const scheduler::Schedule& schedule) {
    json doc;
    doc["objective"] = scheduler::to_string(schedule.objective);
    doc["assignments"] = json::array();
    for (const scheduler::Assignment& a : schedule.assignments) {
        json ja;
        ja["layer"] = a.layer_index;
        ja["npu_share"] = a.npu_share;
        ja["cim_share"] = a.cim_share;
        ja["cim_macros_used"] = a.cim_macros_used;
        doc["assignments"].push_back(ja);
    }
    return doc.dump(2) + "\n";
}

std::string report_to_json(const scheduler::CostReport& report,
                           const scheduler::CostReport& npu_only,
                           scheduler::Objective objective) {
    json doc;
    doc["objective"] = scheduler::to_string(objective);
    doc["total_latency_s"] = report.total_latency_s;
    doc["total_energy_nj"] = report.total_energy_nj;
    doc["npu_only"] = {{"total_latency_s", npu_only.total_latency_s},
                       {"total_energy_nj", npu_only.total_energy_nj}};
    doc["speedup_vs_npu_only"] =
        report.total_latency_s > 0 ? npu_only.total_latency_s / report.total_latency_s
                                   : 1.0;
    doc["energy_saving_vs_npu_only"] =
        npu_only.total_energy_nj > 0
            ? 1.0 - report.total_energy_nj / npu_only.total_energy_nj
            : 0.0;
    doc["layers"] = json::array();
    for (const scheduler::LayerBreakdown& l : report.layers) {
        json jl;
        jl["npu_s"] = l.npu_s;
        jl["cim_s"] = l.cim_s;
        jl["npu_nj"] = l.npu_nj;
        jl["cim_nj"] = l.cim_nj;
        jl["bottleneck"] = l.bottleneck;
        doc["layers"].push_back(jl);
    }
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const netir::Network& net,
                          const scheduler::Schedule& schedule,
                          const scheduler::CostReport& report) {
    std::string csv = "layer,kind,npu_share,cim_share,npu_ms,cim_ms,energy_nj\n";
    for (size_t i = 0; i < net.layers.size(); ++i) {
        const scheduler::Assignment& a = schedule.assignments.at(i);
        const scheduler::LayerBreakdown& l = report.layers.at(i);
        csv += std::to_string(i) + "," + netir::to_string(net.layers[i].kind) + "," +
               std::to_string(a.npu_share) + "," + std::to_string(a.cim_share) + "," +
               format_double(l.npu_s * 1e3) + "," + format_double(l.cim_s * 1e3) +
               "," + format_double(l.npu_nj + l.cim_nj) + "\n";
    }
    return csv;
}

// ---------------------------------------------------------------------------
// Fronts
// ---------------------------------------------------------------------------

std::string front_to_csv(const search::ParetoFront& front,
                         const netir::SearchSpace& space) {
    std::string csv = "acc,latency_s,energy_nj,choice_json\n";
    for (const search::FrontPoint& p : front.points) {
        json choice = json::parse(choice_to_json(p.choice, space));
        csv += format_double(p.accuracy) + "," + format_double(p.latency_s) + "," +
               format_double(p.energy_nj) + "," + csv_quote(choice.dump()) + "\n";
    }
    return csv;
}

std::string front_to_json(const search::ParetoFront& front,
                          const netir::SearchSpace& space) {
    json doc;
    doc["objective"] = scheduler::to_string(front.objective);
    doc["points"] = json::array();
    for (const search::FrontPoint& p : front.points) {
        json jp;
        jp["accuracy"] = p.accuracy;
        jp["latency_s"] = p.latency_s;
        jp["energy_nj"] = p.energy_nj;
        jp["schedule_digest"] = p.schedule_digest;
        jp["choice"] = json::parse(choice_to_json(p.choice, space));
        doc["points"].push_back(jp);
    }
    return doc.dump(2) + "\n";
}

std::string block_mix_to_csv(const std::vector<search::BlockMixRow>& rows) {
    std::string csv = "point,n_vit_layers,n_irb_layers,ratio\n";
    for (size_t i = 0; i < rows.size(); ++i)
        csv += std::to_string(i) + "," + std::to_string(rows[i].n_vit_layers) + "," +
               std::to_string(rows[i].n_irb_layers) + "," +
               format_double(rows[i].ratio) + "\n";
    return csv;
}

// ---------------------------------------------------------------------------
// Calibration CSV
// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> calibration_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("calibration CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "workload,rate")
        throw ParseError("calibration CSV must start with header 'workload,rate'");
    std::vector<std::pair<double, double>> samples;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("calibration CSV line " + std::to_string(lineno) +
                             " has no comma");
        try {
            samples.emplace_back(std::stod(line.substr(0, comma)),
                                 std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError("calibration CSV line " + std::to_string(lineno) +
                             " is not numeric");
        }
    }
    return samples;
}

}  // namespace hetnas::io

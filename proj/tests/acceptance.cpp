// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Every tolerance is pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetnas/cimsim.hpp"
#include "hetnas/costmodel.hpp"
#include "hetnas/io.hpp"
#include "hetnas/netir.hpp"
#include "hetnas/scheduler.hpp"
#include "hetnas/search.hpp"
#include "oracles.hpp"

using namespace hetnas;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    const char* label;
    double budget_s;
    Clock::time_point start = Clock::now();
    bool ok = true;
    std::string detail;

    Criterion(const char* label, double budget_s) : label(label), budget_s(budget_s) {}

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }

    ~Criterion() {
        const double elapsed =
            std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed > budget_s) {
            ok = false;
            if (detail.empty())
                detail = "runtime " + std::to_string(elapsed) + "s over budget";
        }
        std::printf("[%s] %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", label, elapsed,
                    detail.empty() ? "" : " - ", detail.c_str());
        if (!ok) ++failures;
    }
};

const std::string kData = HETNAS_DATA_DIR;
const std::string kCli = HETNAS_CLI_PATH;

costmodel::HardwareConfig sample_hw() {
    static const costmodel::HardwareConfig hw =
        costmodel::load_hw_file(kData + "/sample_hw.json");
    return hw;
}

// --------------------------------------------------------------------------
// 1. Input-read deduplication reaches the 2/3 asymptote.
// --------------------------------------------------------------------------
void criterion_dedup_limit() {
    Criterion c("1 dedup reduction closed form and asymptote", 1.0);
    for (int n = 1; n <= 64; ++n) {
        cimsim::DedupConfig cfg;
        cfg.input_h = 3;
        cfg.input_w = n + 2;  // exactly one full row group of n
        cfg.cu_count = n;
        const double enumerated = cimsim::reduction_ratio(cfg);
        const double closed = cimsim::row_reduction_closed_form(n);
        c.expect(enumerated == closed,
                 "n=" + std::to_string(n) + " enumeration disagrees with closed form");
    }
    cimsim::DedupConfig big;
    big.input_h = 3;
    big.input_w = 1002;
    big.cu_count = 1000;
    const double r = cimsim::reduction_ratio(big);
    c.expect(std::abs(r - 0.666) <= 1.0e-3 + 2.0 / 3.0 - 0.666,
             "n=1000 reduction " + std::to_string(r));
    c.expect(std::abs(r - 2.0 / 3.0) < 1e-3, "n=1000 far from the 2/3 limit");
}

// --------------------------------------------------------------------------
// 2. One access is 16 accumulations of 9 products.
// --------------------------------------------------------------------------
void criterion_access_semantics() {
    Criterion c("2 CIM access semantics", 5.0);
    const costmodel::CimConfig cim = sample_hw().cim;
    c.expect(cim.macs_per_access() == 144, "macs_per_access != 144");

    netir::LayerSpec pixel{netir::LayerKind::DepthwiseConv2d, 1, 1, 16, 16, 3, 3, 1};
    c.expect(costmodel::cim_accesses(pixel, cim) == 1,
             "16-channel 3x3 output pixel is not a single access");
    c.expect(netir::count_macs(pixel) == 144, "pixel MAC count != 144");

    std::mt19937_64 rng(808);
    for (int i = 0; i < 10000; ++i) {
        netir::LayerSpec l;
        switch (rng() % 5) {
            case 0:
                l.kind = netir::LayerKind::DepthwiseConv2d;
                l.kh = l.kw = 3;
                break;
            case 1: l.kind = netir::LayerKind::PointwiseConv2d; break;
            case 2: l.kind = netir::LayerKind::FullyConnected; break;
            case 3: l.kind = netir::LayerKind::AttentionQKVGen; break;
            default: l.kind = netir::LayerKind::MLPLinear; break;
        }
        l.h = 1 + int(rng() % 32);
        l.w = 1 + int(rng() % 32);
        l.in_ch = 1 + int(rng() % 256);
        l.out_ch = l.kind == netir::LayerKind::DepthwiseConv2d ? l.in_ch
                                                               : 1 + int(rng() % 256);
        l.stride = 1 + int(rng() % 2);
        const uint64_t accesses = costmodel::cim_accesses(l, cim);
        if (accesses * 144 < netir::count_macs(l)) {
            c.expect(false, "access lower bound violated at fuzz case " +
                                std::to_string(i));
            break;
        }
    }
}

// --------------------------------------------------------------------------
// 3. Macro count scales latency exactly and never touches energy.
// --------------------------------------------------------------------------
void criterion_macro_scaling() {
    Criterion c("3 multi-macro latency scaling and energy invariance", 1.0);
    costmodel::CimConfig one = sample_hw().cim;
    one.n_macros = 1;
    costmodel::CimConfig eight = one;
    eight.n_macros = 8;

    const netir::LayerSpec slices[] = {
        {netir::LayerKind::DepthwiseConv2d, 28, 28, 48, 48, 3, 3, 1},
        {netir::LayerKind::PointwiseConv2d, 14, 14, 96, 160, 1, 1, 1},
        {netir::LayerKind::FullyConnected, 1, 1, 1280, 1000, 1, 1, 1},
    };
    for (const auto& slice : slices) {
        c.expect(costmodel::cim_latency(slice, eight) ==
                     costmodel::cim_latency(slice, one) / 8.0,
                 "latency(8) != latency(1)/8 bitwise");
        c.expect(costmodel::cim_energy(slice, eight) ==
                     costmodel::cim_energy(slice, one),
                 "energy changed with macro count");
        for (int n : {2, 3, 5, 7}) {
            costmodel::CimConfig k = one;
            k.n_macros = n;
            c.expect(costmodel::cim_energy(slice, k) ==
                         costmodel::cim_energy(slice, one),
                     "energy changed at n=" + std::to_string(n));
        }
    }
}

// --------------------------------------------------------------------------
// 4. Relative area of a multi-CU macro.
// --------------------------------------------------------------------------
void criterion_area_model() {
    Criterion c("4 multi-CU area model", 1.0);
    c.expect(cimsim::total_area(4) == 1.42, "total_area(4) != 1.42");
    c.expect(cimsim::total_area(1) == 1.0, "total_area(1) != 1.0");
    const auto [memory_mm2, periph_mm2] = cimsim::macro_area_report();
    c.expect(memory_mm2 == 0.9 && periph_mm2 == 0.15,
             "macro area report != (0.9, 0.15)");
}

// --------------------------------------------------------------------------
// 5. Scheduler against the exhaustive oracle.
// --------------------------------------------------------------------------
costmodel::DeviceProfile acceptance_flat_npu(double rate) {
    costmodel::DeviceProfile p;
    p.name = "acceptance-npu";
    p.clock_hz = 1e6;
    for (netir::LayerKind k :
         {netir::LayerKind::Conv2d, netir::LayerKind::DepthwiseConv2d,
          netir::LayerKind::PointwiseConv2d, netir::LayerKind::FullyConnected,
          netir::LayerKind::AttentionQKVGen, netir::LayerKind::AttentionScore,
          netir::LayerKind::AttentionContext, netir::LayerKind::MLPLinear}) {
        costmodel::CurvePair pair;
        pair.throughput.peak = rate;
        pair.energy_efficiency.peak = 10.0;
        p.curves.emplace(k, pair);
    }
    return p;
}

struct ToyCase {
    netir::Network net;
    costmodel::HardwareConfig hw;
};

ToyCase random_toy(std::mt19937_64& rng, bool tight) {
    ToyCase t;
    t.hw.npu = acceptance_flat_npu(2.0 + double(rng() % 8));
    t.hw.cim.n_macros = 1 + int(rng() % 3);
    t.hw.cim.cus_per_macro = 1 + int(rng() % 2);
    t.hw.cim.products_per_access = 1 + int(rng() % 4);
    t.hw.cim.accums_per_access = 1 + int(rng() % 3);
    t.hw.cim.access_latency_cycles = 1.0 + double(rng() % 3);
    t.hw.cim.access_energy_nj = 0.01 * double(1 + rng() % 5);
    t.hw.cim.clock_hz = 1e6;
    const int n_layers = 1 + int(rng() % 3);
    for (int i = 0; i < n_layers; ++i) {
        netir::LayerSpec l;
        switch (rng() % 3) {
            case 0: l.kind = netir::LayerKind::PointwiseConv2d; break;
            case 1: l.kind = netir::LayerKind::FullyConnected; break;
            default: l.kind = netir::LayerKind::DepthwiseConv2d; break;
        }
        l.h = l.w = 1 + int(rng() % 5);
        l.out_ch = 1 + int(rng() % 8);
        l.in_ch = l.kind == netir::LayerKind::DepthwiseConv2d ? l.out_ch
                                                              : 1 + int(rng() % 24);
        if (l.kind == netir::LayerKind::DepthwiseConv2d) l.kh = l.kw = 3;
        t.net.layers.push_back(l);
    }
    if (tight) {
        uint64_t unconstrained = 0;
        costmodel::HardwareConfig slack = t.hw;
        slack.cim.capacity_bits_per_macro = 10ull << 20;
        auto [s, r] = scheduler::schedule_network(t.net, slack,
                                                  scheduler::Objective::Latency);
        for (const auto& a : s.assignments)
            unconstrained += scheduler::cim_share_bits(t.net.layers[a.layer_index],
                                                       a.cim_share);
        const uint64_t cap = unconstrained * (30 + rng() % 50) / 100;
        t.hw.cim.capacity_bits_per_macro =
            std::max<uint64_t>(1, cap / t.hw.cim.n_macros);
    } else {
        t.hw.cim.capacity_bits_per_macro = 10ull << 20;
    }
    return t;
}

void criterion_scheduler_optimality() {
    Criterion c("5 scheduler vs exhaustive split oracle", 60.0);
    std::mt19937_64 rng(424242);
    for (int i = 0; i < 1000 && c.ok; ++i) {
        const ToyCase t = random_toy(rng, false);
        for (auto obj : {scheduler::Objective::Latency, scheduler::Objective::Energy}) {
            auto [gs, gr] = scheduler::schedule_network(t.net, t.hw, obj);
            auto [bs, br] = scheduler::brute_force_schedule(t.net, t.hw, obj);
            const double g = scheduler::objective_value(gr, obj);
            const double b = scheduler::objective_value(br, obj);
            c.expect(std::abs(g - b) <= 1e-12 * std::max(1.0, b),
                     "slack case " + std::to_string(i) + " not optimal");
        }
    }
    for (int i = 0; i < 1000 && c.ok; ++i) {
        const ToyCase t = random_toy(rng, true);
        const uint64_t capacity = t.hw.cim.total_capacity_bits();
        for (auto obj : {scheduler::Objective::Latency, scheduler::Objective::Energy}) {
            auto [gs, gr] = scheduler::schedule_network(t.net, t.hw, obj);
            uint64_t used = 0;
            for (const auto& a : gs.assignments)
                used += scheduler::cim_share_bits(t.net.layers[a.layer_index],
                                                  a.cim_share);
            c.expect(used <= capacity, "tight case " + std::to_string(i) +
                                           " violates capacity");
            auto [bs, br] = scheduler::brute_force_schedule(t.net, t.hw, obj);
            c.expect(scheduler::objective_value(gr, obj) <=
                         scheduler::objective_value(br, obj) * 1.25 + 1e-15,
                     "tight case " + std::to_string(i) + " above 1.25x oracle");
        }
    }
}

// --------------------------------------------------------------------------
// 6. Evolutionary search reaches the brute-force front.
// --------------------------------------------------------------------------
void criterion_search_quality() {
    Criterion c("6 evolved front vs brute-force hypervolume", 300.0);
    const search::SyntheticSurrogate surrogate;
    for (const char* name : {"a", "b", "c"}) {
        const netir::SearchSpace space =
            io::space_from_json(io::read_file(kData + "/toy_space_" + name + ".json"));
        search::EvolutionParams params;
        params.population = 48;
        params.generations = 30;
        params.seed = 11;

        const search::ParetoFront brute = search::brute_force_front(
            space, sample_hw(), surrogate, scheduler::Objective::Latency, params);
        const search::ParetoFront evolved = search::evolve(
            space, sample_hw(), surrogate, params, scheduler::Objective::Latency);

        double min_acc = 1e18, max_obj = -1e18;
        for (const auto* front : {&brute, &evolved})
            for (const auto& p : front->points) {
                min_acc = std::min(min_acc, p.accuracy);
                max_obj = std::max(max_obj, p.latency_s);
            }
        const double ref_acc = min_acc - 0.01;
        const double ref_obj = max_obj * 1.05;
        const double hv_brute =
            search::hypervolume(brute.points, scheduler::Objective::Latency,
                                ref_acc, ref_obj);
        const double hv_evolved =
            search::hypervolume(evolved.points, scheduler::Objective::Latency,
                                ref_acc, ref_obj);
        c.expect(hv_brute > 0, std::string("space ") + name + ": empty oracle front");
        c.expect(hv_evolved >= 0.95 * hv_brute,
                 std::string("space ") + name + ": hypervolume ratio " +
                     std::to_string(hv_evolved / hv_brute) + " < 0.95");
    }
}

// --------------------------------------------------------------------------
// 7. Heterogeneous direction under the bundled illustrative profile.
// --------------------------------------------------------------------------
void criterion_qualitative_direction() {
    Criterion c("7 heterogeneous systems beat NPU-only on the sample profile", 60.0);

    // Depthwise/FC-heavy network: the smallest subnet of the full space
    // (every ViT depth is 0 there).
    const netir::SearchSpace space = netir::default_space();
    const netir::Network net =
        netir::materialize(space, netir::smallest_subnet(space));
    auto [schedule, report] =
        scheduler::schedule_network(net, sample_hw(), scheduler::Objective::Latency);
    const auto baseline = scheduler::npu_only_report(net, sample_hw());
    c.expect(report.total_latency_s < baseline.total_latency_s,
             "8-macro schedule not strictly below NPU-only");

    // Latency-oriented front with 8 macros weakly dominates the 0-macro one.
    costmodel::HardwareConfig npu_only_hw = sample_hw();
    npu_only_hw.cim.n_macros = 0;
    const search::SyntheticSurrogate surrogate;
    const netir::SearchSpace toy =
        io::space_from_json(io::read_file(kData + "/toy_space_a.json"));
    search::EvolutionParams params;
    const search::ParetoFront with_cim = search::brute_force_front(
        toy, sample_hw(), surrogate, scheduler::Objective::Latency, params);
    const search::ParetoFront without_cim = search::brute_force_front(
        toy, npu_only_hw, surrogate, scheduler::Objective::Latency, params);
    for (const auto& p0 : without_cim.points) {
        bool covered = false;
        for (const auto& p8 : with_cim.points)
            if (p8.accuracy >= p0.accuracy && p8.latency_s <= p0.latency_s) {
                covered = true;
                break;
            }
        c.expect(covered, "a 0-macro front point is not weakly dominated");
        if (!covered) break;
    }
}

// --------------------------------------------------------------------------
// 8. Workload arithmetic vs the literal loop-count oracle.
// --------------------------------------------------------------------------
void criterion_workload_arithmetic() {
    Criterion c("8 MAC counts equal the nested-loop oracle", 10.0);
    using netir::LayerKind;
    using netir::LayerSpec;
    for (int h = 1; h <= 8 && c.ok; ++h)
        for (int w = 1; w <= 8; ++w)
            for (int ci = 1; ci <= 8; ++ci)
                for (int co = 1; co <= 8; ++co)
                    for (int stride = 1; stride <= 2; ++stride)
                        for (int k : {1, 3}) {
                            LayerSpec conv{LayerKind::Conv2d, h, w, ci, co, k, k, stride};
                            if (netir::count_macs(conv) != oracles::macs(conv)) {
                                c.expect(false, "Conv2d mismatch");
                                break;
                            }
                            if (ci == co) {
                                LayerSpec dw{LayerKind::DepthwiseConv2d, h, w,
                                             ci, co, k, k, stride};
                                if (netir::count_macs(dw) != oracles::macs(dw)) {
                                    c.expect(false, "DepthwiseConv2d mismatch");
                                    break;
                                }
                            }
                        }
    for (int h = 1; h <= 8 && c.ok; ++h)
        for (int w = 1; w <= 8; ++w)
            for (int ci = 1; ci <= 8; ++ci)
                for (int co = 1; co <= 8; ++co) {
                    const LayerSpec kinds[] = {
                        {LayerKind::PointwiseConv2d, h, w, ci, co, 1, 1, 1},
                        {LayerKind::FullyConnected, 1, 1, ci, co, 1, 1, 1},
                        {LayerKind::MLPLinear, h, w, ci, co, 1, 1, 1},
                    };
                    for (const LayerSpec& l : kinds)
                        if (netir::count_macs(l) != oracles::macs(l))
                            c.expect(false, "linear kind mismatch");
                }
    for (int h = 1; h <= 8 && c.ok; ++h)
        for (int w = 1; w <= 8; ++w)
            for (int ch = 1; ch <= 8; ++ch) {
                const LayerSpec kinds[] = {
                    {LayerKind::AttentionQKVGen, h, w, ch, 24, 1, 1, 1, 1},
                    {LayerKind::AttentionScore, h, w, 24, 8, 1, 1, 1, 1},
                    {LayerKind::AttentionContext, h, w, 8, ch, 1, 1, 1, 1},
                };
                for (const LayerSpec& l : kinds)
                    if (netir::count_macs(l) != oracles::macs(l))
                        c.expect(false, "attention kind mismatch");
            }
}

// --------------------------------------------------------------------------
// 9. CLI determinism across reruns and worker counts.
// --------------------------------------------------------------------------
int run_quiet(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string content = io::read_file(entry.path().string());
        if (entry.path().filename() == "manifest.json") {
            json m = json::parse(content);
            m.erase("wall_ms");  // wall time is the one legitimate difference
            content = m.dump(2);
        }
        files[entry.path().filename().string()] = std::move(content);
    }
    return files;
}

void criterion_cli_determinism() {
    Criterion c("9 CLI byte-level determinism", 120.0);
    const std::string hw = kData + "/sample_hw.json";
    const std::string space = kData + "/toy_space_a.json";
    const fs::path base = fs::temp_directory_path() / "hetnas-acceptance";
    fs::remove_all(base);

    const std::vector<std::pair<std::string, std::string>> verbs = {
        {"space", "space --space " + space + " --cardinality --emit random --seed 3"},
        {"estimate", ""},  // filled below, needs the emitted subnet
        {"simulate-cim",
         "simulate-cim --kernel 3 --stride 1 --input 12 --cu 4 --layout row "
         "--sweep-cu 4"},
        {"calibrate", "calibrate --samples " + kData + "/sample_calibration.csv"},
        {"search", "search --space " + space + " --hw " + hw +
                       " --population 16 --generations 8 --seed 5"},
    };

    const fs::path sub = base / "subnet";
    if (run_quiet("space --space " + space + " --emit smallest --output-dir " +
                  sub.string()) != 0) {
        c.expect(false, "subnet emission failed");
        return;
    }
    const std::string estimate_args = "estimate --space " + space + " --choice " +
                                      (sub / "subnet.json").string() + " --hw " + hw;

    for (const auto& [tag, args0] : verbs) {
        const std::string args = args0.empty() ? estimate_args : args0;
        const fs::path d1 = base / (tag + "-1");
        const fs::path d2 = base / (tag + "-2");
        if (run_quiet(args + " --output-dir " + d1.string()) != 0 ||
            run_quiet(args + " --output-dir " + d2.string()) != 0) {
            c.expect(false, tag + " run failed");
            return;
        }
        c.expect(dir_contents(d1) == dir_contents(d2), tag + " outputs differ");
    }

    // Worker count must not change the data files.
    const std::string jobs_args = "search --space " + space + " --hw " + hw +
                                  " --population 16 --generations 8 --seed 5";
    const fs::path j1 = base / "jobs-1";
    const fs::path j4 = base / "jobs-4";
    if (run_quiet(jobs_args + " --jobs 1 --output-dir " + j1.string()) != 0 ||
        run_quiet(jobs_args + " --jobs 4 --output-dir " + j4.string()) != 0) {
        c.expect(false, "jobs runs failed");
        return;
    }
    auto f1 = dir_contents(j1);
    auto f4 = dir_contents(j4);
    f1.erase("manifest.json");
    f4.erase("manifest.json");
    c.expect(f1 == f4, "jobs 1 vs 4 outputs differ");
    fs::remove_all(base);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_dedup_limit();
    criterion_access_semantics();
    criterion_macro_scaling();
    criterion_area_model();
    criterion_scheduler_optimality();
    criterion_search_quality();
    criterion_qualitative_direction();
    criterion_workload_arithmetic();
    criterion_cli_determinism();
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}

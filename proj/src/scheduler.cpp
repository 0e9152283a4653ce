#include "hetnas/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "hetnas/errors.hpp"

namespace hetnas::scheduler {

using costmodel::CimConfig;
using netir::LayerKind;

const char* to_string(Objective o) {
    return o == Objective::Latency ? "latency" : "energy";
}

Objective objective_from_string(const std::string& name) {
    if (name == "latency") return Objective::Latency;
    if (name == "energy") return Objective::Energy;
    throw ParseError("unknown objective: " + name);
}

int splittable_extent(const LayerSpec& layer) {
    switch (layer.kind) {
        case LayerKind::AttentionScore:
        case LayerKind::AttentionContext:
            return layer.heads;
        default:
            return layer.out_ch;
    }
}

LayerSpec slice_by_share(const LayerSpec& layer, int share) {
    LayerSpec s = layer;
    switch (layer.kind) {
        case LayerKind::DepthwiseConv2d:
            s.in_ch = share;
            s.out_ch = share;
            break;
        case LayerKind::AttentionScore:
            s.heads = share;
            s.in_ch = 3 * layer.head_dim * share;
            s.out_ch = layer.head_dim * share;
            break;
        case LayerKind::AttentionContext:
            // A head slice still feeds all projection outputs (partial sums).
            s.heads = share;
            s.in_ch = layer.head_dim * share;
            break;
        default:
            s.out_ch = share;
            break;
    }
    return s;
}

std::vector<int> cim_share_grid(const LayerSpec& layer, const HardwareConfig& hw) {
    const int extent = splittable_extent(layer);
    if (hw.cim.n_macros < 1 || !hw.cim.supports(layer.kind)) return {0};
    std::vector<int> grid;
    if (layer.kind == LayerKind::DepthwiseConv2d) {
        const int step = hw.cim.accums_per_access;
        for (int s = 0; s <= extent; s += step) grid.push_back(s);
    } else {
        grid.resize(extent + 1);
        for (int s = 0; s <= extent; ++s) grid[s] = s;
    }
    return grid;
}

uint64_t cim_share_bits(const LayerSpec& layer, int cim_share) {
    if (cim_share <= 0) return 0;
    return netir::count_params(slice_by_share(layer, cim_share)) * 8;
}

LayerBreakdown layer_cost(const LayerSpec& layer, int cim_share,
                          const HardwareConfig& hw) {
    const int extent = splittable_extent(layer);
    const int npu_share = extent - cim_share;
    LayerBreakdown cost;
    if (npu_share > 0) {
        const LayerSpec slice = slice_by_share(layer, npu_share);
        cost.npu_s = costmodel::npu_latency(slice, hw.npu);
        cost.npu_nj = costmodel::npu_energy(slice, hw.npu);
    }
    if (cim_share > 0) {
        const LayerSpec slice = slice_by_share(layer, cim_share);
        cost.cim_s = costmodel::cim_latency(slice, hw.cim);
        cost.cim_nj = costmodel::cim_energy(slice, hw.cim);
        const netir::Traffic traffic = netir::count_traffic(slice);
        const double bytes =
            static_cast<double>(traffic.input_bytes + traffic.output_bytes);
        cost.cim_s += bytes * hw.transfer_latency_s_per_byte;
        cost.cim_nj += bytes * hw.transfer_energy_nj_per_byte;
    }
    if (cost.npu_s > cost.cim_s)
        cost.bottleneck = "npu";
    else if (cost.npu_s < cost.cim_s)
        cost.bottleneck = "cim";
    else
        cost.bottleneck = cim_share > 0 ? "balanced" : "npu";
    return cost;
}

namespace {

double split_cost(const LayerBreakdown& c, Objective objective) {
    return objective == Objective::Latency ? std::max(c.npu_s, c.cim_s)
                                           : c.npu_nj + c.cim_nj;
}

// Best share on the grid, optionally under a weight-bit budget. Grid is
// ascending and replacement is on <=, so ties land on the larger share.
// Shares whose slice alone overflows the CIM are never candidates.
int best_share(const LayerSpec& layer, const std::vector<int>& grid,
               const HardwareConfig& hw, Objective objective,
               uint64_t bit_budget = std::numeric_limits<uint64_t>::max()) {
    const uint64_t budget = std::min(bit_budget, hw.cim.total_capacity_bits());
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int share : grid) {
        if (cim_share_bits(layer, share) > budget) continue;
        const double cost = split_cost(layer_cost(layer, share, hw), objective);
        if (cost <= best_cost) {
            best_cost = cost;
            best = share;
        }
    }
    return best;
}

}  // namespace

Assignment split_layer(const LayerSpec& layer, const HardwareConfig& hw,
                       Objective objective, int layer_index) {
    const std::vector<int> grid = cim_share_grid(layer, hw);
    const int share = best_share(layer, grid, hw, objective);
    Assignment a;
    a.layer_index = layer_index;
    a.cim_share = share;
    a.npu_share = splittable_extent(layer) - share;
    a.cim_macros_used = share > 0 ? hw.cim.n_macros : 0;
    return a;
}

CostReport report_for(const Network& net, const Schedule& schedule,
                      const HardwareConfig& hw) {
    CostReport report;
    report.layers.reserve(net.layers.size());
    for (size_t i = 0; i < net.layers.size(); ++i) {
        const Assignment& a = schedule.assignments.at(i);
        LayerBreakdown cost = layer_cost(net.layers[i], a.cim_share, hw);
        report.total_latency_s += std::max(cost.npu_s, cost.cim_s);
        report.total_energy_nj += cost.npu_nj + cost.cim_nj;
        report.layers.push_back(std::move(cost));
    }
    return report;
}

std::pair<Schedule, CostReport> schedule_network(const Network& net,
                                                 const HardwareConfig& hw,
                                                 Objective objective) {
    Schedule schedule;
    schedule.objective = objective;
    for (size_t i = 0; i < net.layers.size(); ++i)
        schedule.assignments.push_back(
            split_layer(net.layers[i], hw, objective, static_cast<int>(i)));

    const uint64_t capacity = hw.cim.total_capacity_bits();
    const size_t n = net.layers.size();
    uint64_t bits = 0;
    for (const Assignment& a : schedule.assignments)
        bits += cim_share_bits(net.layers[a.layer_index], a.cim_share);
    if (bits <= capacity) {
        CostReport report = report_for(net, schedule, hw);
        return {std::move(schedule), std::move(report)};
    }

    // Capacity repair. Work on per-layer grid positions with precomputed
    // cost and weight tables.
    std::vector<std::vector<int>> grids(n);
    std::vector<std::vector<double>> cost(n);
    std::vector<std::vector<uint64_t>> weight(n);
    std::vector<size_t> pos(n, 0), unconstrained(n, 0);
    for (size_t i = 0; i < n; ++i) {
        grids[i] = cim_share_grid(net.layers[i], hw);
        for (int share : grids[i]) {
            weight[i].push_back(cim_share_bits(net.layers[i], share));
            cost[i].push_back(weight[i].back() > capacity
                                  ? std::numeric_limits<double>::infinity()
                                  : split_cost(layer_cost(net.layers[i], share, hw),
                                               objective));
        }
        const auto it = std::find(grids[i].begin(), grids[i].end(),
                                  schedule.assignments[i].cim_share);
        assert(it != grids[i].end());
        pos[i] = unconstrained[i] = static_cast<size_t>(it - grids[i].begin());
    }

    auto move_to = [&](size_t i, size_t g) {
        bits -= weight[i][pos[i]];
        pos[i] = g;
        bits += weight[i][g];
    };

    // Phase 1: walk shares down one grid step at a time, always taking the
    // step that costs the least objective increase per weight bit freed.
    // Freed bits beyond the remaining deficit buy nothing, so the ratio
    // caps the freed amount at the deficit.
    while (bits > capacity) {
        const uint64_t deficit = bits - capacity;
        size_t victim = n;
        double victim_key = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) {
            if (pos[i] == 0) continue;
            const uint64_t freed = weight[i][pos[i]] - weight[i][pos[i] - 1];
            const double delta = cost[i][pos[i] - 1] - cost[i][pos[i]];
            const double key = delta / static_cast<double>(std::min(freed, deficit));
            if (key < victim_key) {
                victim_key = key;
                victim = i;
            }
        }
        assert(victim < n && "capacity overrun with no CIM shares");
        move_to(victim, pos[victim] - 1);
    }

    // Budgeted re-split of one layer, others fixed; ties toward the larger
    // share. Only ever lowers the objective.
    auto sweep = [&] {
        for (size_t i = 0; i < n; ++i) {
            const uint64_t budget = capacity - (bits - weight[i][pos[i]]);
            size_t best = 0;
            for (size_t g = 0; g < grids[i].size(); ++g)
                if (weight[i][g] <= budget && cost[i][g] <= cost[i][best])
                    best = g;
            move_to(i, best);
        }
    };
    sweep();

    // Phase 2: try to fund an upgrade of a repaired layer by evicting
    // marginal steps from other layers; keep strict improvements. Catches
    // the knapsack cases the one-way walk cannot see.
    for (int pass = 0; pass < 3; ++pass) {
        bool improved = false;
        for (size_t i = 0; i < n; ++i) {
            for (size_t target = pos[i] + 1; target <= unconstrained[i]; ++target) {
                const uint64_t grown = weight[i][target] - weight[i][pos[i]];
                const uint64_t slack = capacity - bits;
                if (grown <= slack) continue;  // sweep territory
                uint64_t need = grown - slack;
                const double gain = cost[i][pos[i]] - cost[i][target];
                if (gain <= 0) continue;

                // Simulated greedy eviction from the other layers.
                std::vector<size_t> sim_pos = pos;
                std::vector<std::pair<size_t, size_t>> moves;
                double pay = 0.0;
                while (need > 0) {
                    size_t donor = n;
                    double donor_key = std::numeric_limits<double>::infinity();
                    for (size_t j = 0; j < n; ++j) {
                        if (j == i || sim_pos[j] == 0) continue;
                        const uint64_t freed =
                            weight[j][sim_pos[j]] - weight[j][sim_pos[j] - 1];
                        const double delta =
                            cost[j][sim_pos[j] - 1] - cost[j][sim_pos[j]];
                        const double key =
                            delta / static_cast<double>(std::min(freed, need));
                        if (key < donor_key) {
                            donor_key = key;
                            donor = j;
                        }
                    }
                    if (donor == n) break;  // nothing left to evict
                    const uint64_t freed =
                        weight[donor][sim_pos[donor]] - weight[donor][sim_pos[donor] - 1];
                    pay += cost[donor][sim_pos[donor] - 1] - cost[donor][sim_pos[donor]];
                    --sim_pos[donor];
                    moves.emplace_back(donor, sim_pos[donor]);
                    need -= std::min(freed, need);
                    if (pay >= gain) break;  // already not worth it
                }
                if (need > 0 || gain - pay <= 1e-15) continue;

                for (const auto& [j, g] : moves) move_to(j, g);
                move_to(i, target);
                assert(bits <= capacity);
                improved = true;
                break;
            }
        }
        if (!improved) break;
        sweep();
    }
    assert(bits <= capacity);

    for (size_t i = 0; i < n; ++i) {
        Assignment& a = schedule.assignments[i];
        a.cim_share = grids[i][pos[i]];
        a.npu_share = splittable_extent(net.layers[i]) - a.cim_share;
        a.cim_macros_used = a.cim_share > 0 ? hw.cim.n_macros : 0;
    }
    CostReport report = report_for(net, schedule, hw);
    return {std::move(schedule), std::move(report)};
}

CostReport npu_only_report(const Network& net, const HardwareConfig& hw) {
    Schedule schedule;
    schedule.objective = Objective::Latency;
    for (size_t i = 0; i < net.layers.size(); ++i) {
        Assignment a;
        a.layer_index = static_cast<int>(i);
        a.npu_share = splittable_extent(net.layers[i]);
        schedule.assignments.push_back(a);
    }
    return report_for(net, schedule, hw);
}

std::pair<Schedule, CostReport> brute_force_schedule(const Network& net,
                                                     const HardwareConfig& hw,
                                                     Objective objective,
                                                     uint64_t limit) {
    std::vector<std::vector<int>> grids;
    uint64_t combos = 1;
    for (const LayerSpec& layer : net.layers) {
        grids.push_back(cim_share_grid(layer, hw));
        combos *= grids.back().size();
        if (combos > limit)
            throw TooLarge("joint split grid exceeds " + std::to_string(limit) +
                           " combinations");
    }

    // Per-layer cost and bit tables, indexed by grid position. Shares that
    // alone overflow the CIM get an infinite cost and are pruned by the
    // capacity bound anyway.
    const uint64_t capacity = hw.cim.total_capacity_bits();
    const size_t n = net.layers.size();
    std::vector<std::vector<double>> costs(n);
    std::vector<std::vector<uint64_t>> bits(n);
    for (size_t i = 0; i < n; ++i) {
        for (int share : grids[i]) {
            const uint64_t b = cim_share_bits(net.layers[i], share);
            bits[i].push_back(b);
            costs[i].push_back(
                b > capacity
                    ? std::numeric_limits<double>::infinity()
                    : split_cost(layer_cost(net.layers[i], share, hw), objective));
        }
    }
    std::vector<size_t> pick(n, 0), best_pick(n, 0);
    double best_cost = std::numeric_limits<double>::infinity();
    bool found = false;

    auto walk = [&](auto&& self, size_t i, double cost, uint64_t used) -> void {
        if (used > capacity) return;
        if (i == n) {
            if (cost < best_cost) {
                best_cost = cost;
                best_pick = pick;
                found = true;
            }
            return;
        }
        for (size_t g = 0; g < grids[i].size(); ++g) {
            pick[i] = g;
            self(self, i + 1, cost + costs[i][g], used + bits[i][g]);
        }
    };
    walk(walk, 0, 0.0, 0);

    if (!found) throw InfeasibleCapacity("no feasible joint split");

    Schedule schedule;
    schedule.objective = objective;
    for (size_t i = 0; i < n; ++i) {
        Assignment a;
        a.layer_index = static_cast<int>(i);
        a.cim_share = grids[i][best_pick[i]];
        a.npu_share = splittable_extent(net.layers[i]) - a.cim_share;
        a.cim_macros_used = a.cim_share > 0 ? hw.cim.n_macros : 0;
        schedule.assignments.push_back(a);
    }
    return {std::move(schedule), report_for(net, schedule, hw)};
}

double objective_value(const CostReport& report, Objective objective) {
    return objective == Objective::Latency ? report.total_latency_s
                                           : report.total_energy_nj;
}

}  // namespace hetnas::scheduler

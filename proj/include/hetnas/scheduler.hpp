#ifndef HETNAS_SCHEDULER_HPP
#define HETNAS_SCHEDULER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hetnas/costmodel.hpp"
#include "hetnas/netir.hpp"

namespace hetnas::scheduler {

using costmodel::HardwareConfig;
using netir::LayerSpec;
using netir::Network;

enum class Objective { Latency, Energy };

const char* to_string(Objective o);
Objective objective_from_string(const std::string& name);

// How one layer is divided between the two devices. Shares are counted in
// the layer's splittable extent: output channels for conv kinds, heads for
// score/context, output features for FC-like kinds.
struct Assignment {
    int layer_index = 0;
    int npu_share = 0;
    int cim_share = 0;
    int cim_macros_used = 0;
};

struct Schedule {
    std::vector<Assignment> assignments;
    Objective objective = Objective::Latency;
};

struct LayerBreakdown {
    double npu_s = 0.0;
    double cim_s = 0.0;
    double npu_nj = 0.0;
    double cim_nj = 0.0;
    std::string bottleneck;  // "npu" | "cim" | "balanced" | "idle"
};

struct CostReport {
    double total_latency_s = 0.0;
    double total_energy_nj = 0.0;
    std::vector<LayerBreakdown> layers;
};

// Units the layer can be divided in.
int splittable_extent(const LayerSpec& layer);

// The layer restricted to `share` units of its extent. share == extent
// returns the layer itself.
LayerSpec slice_by_share(const LayerSpec& layer, int share);

// Allowed CIM shares for the layer, ascending, always starting at 0.
// Depthwise convolutions move in 16-channel steps (one access's
// accumulation width); remainder channels stay on the NPU.
std::vector<int> cim_share_grid(const LayerSpec& layer, const HardwareConfig& hw);

// Weight bits the CIM share would occupy.
uint64_t cim_share_bits(const LayerSpec& layer, int cim_share);

// Cost of running one layer with the given split; the two devices run
// their slices concurrently.
LayerBreakdown layer_cost(const LayerSpec& layer, int cim_share,
                          const HardwareConfig& hw);

// Best split for one layer, ignoring the joint capacity constraint.
// Exhaustive scan over the share grid; ties break toward the larger CIM
// share. Kinds the CIM cannot run come back all-NPU.
Assignment split_layer(const LayerSpec& layer, const HardwareConfig& hw,
                       Objective objective, int layer_index = 0);

// Whole-network schedule: per-layer splits plus a greedy capacity repair
// that walks layers in ascending benefit-per-weight-bit order, shrinking
// their CIM shares until the joint weight footprint fits.
std::pair<Schedule, CostReport> schedule_network(const Network& net,
                                                 const HardwareConfig& hw,
                                                 Objective objective);

CostReport npu_only_report(const Network& net, const HardwareConfig& hw);

// Exact joint optimum by enumeration, for tests and small networks.
// Throws TooLarge when the joint grid exceeds `limit` combinations.
std::pair<Schedule, CostReport> brute_force_schedule(const Network& net,
                                                     const HardwareConfig& hw,
                                                     Objective objective,
                                                     uint64_t limit = 1000000);

double objective_value(const CostReport& report, Objective objective);

// Recomputes the report for a fixed schedule (used by serialization and
// the oracle paths).
CostReport report_for(const Network& net, const Schedule& schedule,
                      const HardwareConfig& hw);

}  // namespace hetnas::scheduler

#endif  // HETNAS_SCHEDULER_HPP

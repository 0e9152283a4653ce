#ifndef HETNAS_COSTMODEL_HPP
#define HETNAS_COSTMODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hetnas/netir.hpp"

namespace hetnas::costmodel {

using netir::LayerKind;
using netir::LayerSpec;

// ---------------------------------------------------------------------------
// Saturating rate curves
// ---------------------------------------------------------------------------

// Achieved rate as a function of workload size: either the hyperbola
// peak*x/(x+half_point), or a piecewise-linear lookup table (clamped ends).
// Rates rise with workload and level off at the device peak. `floor` is a
// fixed per-invocation overhead (cycles for throughput curves, nJ for
// energy curves).
struct SaturatingCurve {
    enum class Kind { Hyperbolic, Table };

    Kind kind = Kind::Hyperbolic;
    double peak = 1.0;
    double half_point = 0.0;
    double floor = 0.0;
    std::vector<std::pair<double, double>> table;  // x ascending, rate > 0

    double rate_at(double workload) const;
    double max_rate() const;
};

struct CurvePair {
    SaturatingCurve throughput;         // MACs per cycle
    SaturatingCurve energy_efficiency;  // MACs per nJ
};

struct DeviceProfile {
    std::string name;
    double clock_hz = 1.0;
    // Optional overhead for zero-MAC elementwise layers.
    double elementwise_cycles_per_element = 0.0;
    double elementwise_nj_per_element = 0.0;
    std::map<LayerKind, CurvePair> curves;  // absent kind = unsupported

    bool supports(LayerKind kind) const;
};

// ---------------------------------------------------------------------------
// CIM configuration
// ---------------------------------------------------------------------------

// Share of one access's energy spent on input transfer, compute, and
// weight read. Input transfer is the only part input deduplication scales.
struct EnergySplit {
    double input_transfer = 1.0 / 3;
    double compute = 1.0 / 3;
    double weight_read = 1.0 / 3;
};

struct CimConfig {
    int n_macros = 0;  // 0 = NPU-only system
    int cus_per_macro = 1;
    uint64_t capacity_bits_per_macro = 10ull << 20;  // 10 Mb
    // One access accumulates `products_per_access` products into
    // `accums_per_access` parallel accumulators.
    int products_per_access = 9;
    int accums_per_access = 16;
    double access_latency_cycles = 1.0;
    double access_energy_nj = 0.0;
    double clock_hz = 1.0;
    std::set<LayerKind> supported = {LayerKind::DepthwiseConv2d,
                                     LayerKind::PointwiseConv2d,
                                     LayerKind::FullyConnected};
    EnergySplit energy_split;

    int macs_per_access() const { return products_per_access * accums_per_access; }
    uint64_t total_capacity_bits() const {
        return capacity_bits_per_macro * static_cast<uint64_t>(n_macros);
    }
    // QKV generation and transformer MLPs are static-weight per-token
    // matmuls and follow the FullyConnected entry; score/context multiply
    // two activations and never run on CIM.
    bool supports(LayerKind kind) const;
};

struct HardwareConfig {
    DeviceProfile npu;
    CimConfig cim;
    // Per-byte tax on data moved to/from CIM for layers with a CIM share.
    double transfer_latency_s_per_byte = 0.0;
    double transfer_energy_nj_per_byte = 0.0;
};

// ---------------------------------------------------------------------------
// Profile ingestion (strict JSON documents)
// ---------------------------------------------------------------------------

DeviceProfile load_profile(const std::string& json_text);
HardwareConfig load_hw(const std::string& json_text);
std::string save_profile(const DeviceProfile& profile);
std::string save_hw(const HardwareConfig& hw);

HardwareConfig load_hw_file(const std::string& path);

// ---------------------------------------------------------------------------
// Curve fitting
// ---------------------------------------------------------------------------

struct FitReport {
    SaturatingCurve curve;
    double max_rel_residual = 0.0;
    double mean_rel_residual = 0.0;
    double flag_threshold = 0.1;
    bool flagged = false;
};

// Least-squares fit of peak*x/(x+half_point) minimizing relative error.
// Throws DegenerateSamples when all workloads coincide.
FitReport fit_curve(const std::vector<std::pair<double, double>>& samples,
                    double flag_threshold = 0.1);

// ---------------------------------------------------------------------------
// NPU costs
// ---------------------------------------------------------------------------

double npu_latency(const LayerSpec& layer, const DeviceProfile& profile);  // seconds
double npu_energy(const LayerSpec& layer, const DeviceProfile& profile);   // nJ

// ---------------------------------------------------------------------------
// CIM costs
// ---------------------------------------------------------------------------

// Number of macro accesses needed for the slice, from the kernel/channel
// tiling of the products-by-accumulators array.
uint64_t cim_accesses(const LayerSpec& slice, const CimConfig& cim);

double cim_latency(const LayerSpec& slice, const CimConfig& cim);  // seconds
double cim_energy(const LayerSpec& slice, const CimConfig& cim);   // nJ

// Fraction of one access's MAC capacity the slice actually fills.
double cim_utilization(const LayerSpec& slice, const CimConfig& cim);

struct OccupancyReport {
    bool fits = false;
    uint64_t total_bits = 0;
    uint64_t capacity_bits = 0;
    std::vector<uint64_t> per_macro_bits;  // sequential fill
};

OccupancyReport weights_fit(const std::vector<LayerSpec>& assigned_slices,
                            const CimConfig& cim);

}  // namespace hetnas::costmodel

#endif  // HETNAS_COSTMODEL_HPP

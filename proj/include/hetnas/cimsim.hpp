#ifndef HETNAS_CIMSIM_HPP
#define HETNAS_CIMSIM_HPP

#include <cstdint>
#include <utility>

#include "hetnas/netir.hpp"

namespace hetnas::cimsim {

// How simultaneously-computed outputs are grouped over the output grid.
enum class GroupLayout { Row, Tile };

struct DedupConfig {
    int kh = 3;
    int kw = 3;
    int stride = 1;
    int input_h = 0;
    int input_w = 0;
    int cu_count = 1;
    GroupLayout layout = GroupLayout::Row;
    int tile_rows = 1;  // Tile layout only; tile_rows * tile_cols == cu_count
    int tile_cols = 1;

    int out_h() const { return (input_h - kh) / stride + 1; }
    int out_w() const { return (input_w - kw) / stride + 1; }
};

void require_valid(const DedupConfig& cfg);  // throws EmptyOutput / ValidationError

// Reads with one input transfer per kernel tap per output.
uint64_t naive_reads(const DedupConfig& cfg);

// Reads when each CU group transfers the union of its receptive fields
// once. Exact enumeration, partial edge groups included.
uint64_t unique_reads(const DedupConfig& cfg);

// 1 - unique/naive, in [0, 1).
double reduction_ratio(const DedupConfig& cfg);

// Row layout, 3x3 kernel, stride 1, one full group of n outputs:
// reduction = 1 - (n+2)/(3n).
double row_reduction_closed_form(int group_size);

// Input-read multiplier applied to the input-transfer share of a CIM
// access. Depthwise convolutions benefit when several adjacent outputs are
// computed at once; every other kind returns 1. Results are memoized by
// geometry.
double dedup_traffic_factor(const netir::LayerSpec& layer, int cu_count);

// ---------------------------------------------------------------------------
// Area model
// ---------------------------------------------------------------------------

struct AreaModel {
    double bitcell_area_um2 = 0.0063;
    // Additive overhead per added CU, in percent of the base compute area.
    int cu_overhead_percent = 14;
    // Synthesized IFMP controller overhead is below this bound; it is kept
    // out of the default total so the relative area stays a round number.
    double ifmp_ctrl_overhead_percent = 0.0;
    double memory_area_mm2 = 0.9;
    double periphery_area_mm2 = 0.15;
};

inline constexpr double kIfmpOverheadBoundPercent = 0.1;

// Relative compute area: 1 at a single CU, affine in the CU count.
double total_area(int n_cu, const AreaModel& model = {});

// (memory mm^2, compute periphery mm^2) of one macro.
std::pair<double, double> macro_area_report(const AreaModel& model = {});

}  // namespace hetnas::cimsim

#endif  // HETNAS_CIMSIM_HPP

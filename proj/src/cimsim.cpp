#include "hetnas/cimsim.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "hetnas/errors.hpp"

namespace hetnas::cimsim {

void require_valid(const DedupConfig& cfg) {
    if (cfg.kh < 1 || cfg.kw < 1)
        throw ValidationError("kernel dims must be >= 1");
    if (cfg.stride < 1)
        throw ValidationError("stride must be >= 1");
    if (cfg.cu_count < 1)
        throw ValidationError("cu_count must be >= 1");
    if (cfg.layout == GroupLayout::Tile && cfg.tile_rows * cfg.tile_cols != cfg.cu_count)
        throw ValidationError("tile dims must multiply to cu_count");
    if (cfg.input_h < cfg.kh || cfg.input_w < cfg.kw)
        throw EmptyOutput("input smaller than kernel");
}

uint64_t naive_reads(const DedupConfig& cfg) {
    require_valid(cfg);
    return static_cast<uint64_t>(cfg.out_h()) * cfg.out_w() * cfg.kh * cfg.kw;
}

namespace {

// Distinct input coordinates touched by a group of output positions.
uint64_t group_unique(const DedupConfig& cfg,
                      const std::vector<std::pair<int, int>>& outputs) {
    std::unordered_set<int64_t> coords;
    coords.reserve(outputs.size() * cfg.kh * cfg.kw);
    for (const auto& [oy, ox] : outputs) {
        const int iy0 = oy * cfg.stride;
        const int ix0 = ox * cfg.stride;
        for (int dy = 0; dy < cfg.kh; ++dy)
            for (int dx = 0; dx < cfg.kw; ++dx)
                coords.insert(static_cast<int64_t>(iy0 + dy) * cfg.input_w + ix0 + dx);
    }
    return coords.size();
}

}  // namespace

uint64_t unique_reads(const DedupConfig& cfg) {
    require_valid(cfg);
    const int oh = cfg.out_h(), ow = cfg.out_w();
    uint64_t total = 0;
    std::vector<std::pair<int, int>> group;

    if (cfg.layout == GroupLayout::Row) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox0 = 0; ox0 < ow; ox0 += cfg.cu_count) {
                group.clear();
                const int n = std::min(cfg.cu_count, ow - ox0);
                for (int i = 0; i < n; ++i) group.emplace_back(oy, ox0 + i);
                total += group_unique(cfg, group);
            }
        }
    } else {
        for (int oy0 = 0; oy0 < oh; oy0 += cfg.tile_rows) {
            for (int ox0 = 0; ox0 < ow; ox0 += cfg.tile_cols) {
                group.clear();
                for (int dy = 0; dy < cfg.tile_rows && oy0 + dy < oh; ++dy)
                    for (int dx = 0; dx < cfg.tile_cols && ox0 + dx < ow; ++dx)
                        group.emplace_back(oy0 + dy, ox0 + dx);
                total += group_unique(cfg, group);
            }
        }
    }
    return total;
}

double reduction_ratio(const DedupConfig& cfg) {
    const uint64_t naive = naive_reads(cfg);
    const uint64_t unique = unique_reads(cfg);
    return 1.0 - static_cast<double>(unique) / static_cast<double>(naive);
}

double row_reduction_closed_form(int group_size) {
    return 1.0 - static_cast<double>(group_size + 2) / (3.0 * group_size);
}

double dedup_traffic_factor(const netir::LayerSpec& layer, int cu_count) {
    if (layer.kind != netir::LayerKind::DepthwiseConv2d || cu_count <= 1)
        return 1.0;
    if (layer.h < layer.kh || layer.w < layer.kw)
        return 1.0;  // degenerate plane, nothing to share

    using Key = std::tuple<int, int, int, int, int, int>;
    static std::map<Key, double> cache;
    static std::mutex mutex;

    const Key key{layer.h, layer.w, layer.kh, layer.kw, layer.stride, cu_count};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    DedupConfig cfg;
    cfg.kh = layer.kh;
    cfg.kw = layer.kw;
    cfg.stride = layer.stride;
    cfg.input_h = layer.h;
    cfg.input_w = layer.w;
    cfg.cu_count = cu_count;
    cfg.layout = GroupLayout::Row;
    const double factor = static_cast<double>(unique_reads(cfg)) /
                          static_cast<double>(naive_reads(cfg));
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, factor);
    return factor;
}

double total_area(int n_cu, const AreaModel& model) {
    if (n_cu < 1) throw ValidationError("n_cu must be >= 1");
    return (100.0 + model.cu_overhead_percent * (n_cu - 1) +
            model.ifmp_ctrl_overhead_percent) /
           100.0;
}

std::pair<double, double> macro_area_report(const AreaModel& model) {
    return {model.memory_area_mm2, model.periphery_area_mm2};
}

}  // namespace hetnas::cimsim

// Independent oracles used by the unit and acceptance suites. Everything
// here recomputes expected values by literal enumeration, never through the
// library's own arithmetic.
#ifndef HETNAS_TESTS_ORACLES_HPP
#define HETNAS_TESTS_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "hetnas/cimsim.hpp"
#include "hetnas/costmodel.hpp"
#include "hetnas/netir.hpp"

namespace oracles {

using hetnas::netir::LayerKind;
using hetnas::netir::LayerSpec;

// Literal nested-loop MAC counting, one addend per multiply-accumulate.
inline uint64_t macs(const LayerSpec& l) {
    uint64_t count = 0;
    const int oh = l.out_h(), ow = l.out_w();
    switch (l.kind) {
        case LayerKind::Conv2d:
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox)
                    for (int oc = 0; oc < l.out_ch; ++oc)
                        for (int ic = 0; ic < l.in_ch; ++ic)
                            for (int ky = 0; ky < l.kh; ++ky)
                                for (int kx = 0; kx < l.kw; ++kx) ++count;
            break;
        case LayerKind::DepthwiseConv2d:
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox)
                    for (int c = 0; c < l.out_ch; ++c)
                        for (int ky = 0; ky < l.kh; ++ky)
                            for (int kx = 0; kx < l.kw; ++kx) ++count;
            break;
        case LayerKind::PointwiseConv2d:
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox)
                    for (int oc = 0; oc < l.out_ch; ++oc)
                        for (int ic = 0; ic < l.in_ch; ++ic) ++count;
            break;
        case LayerKind::FullyConnected:
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox)
                    for (int oc = 0; oc < l.out_ch; ++oc)
                        for (int ic = 0; ic < l.in_ch; ++ic) ++count;
            break;
        case LayerKind::AttentionQKVGen:
        case LayerKind::MLPLinear:
            for (int ty = 0; ty < l.h; ++ty)
                for (int tx = 0; tx < l.w; ++tx)
                    for (int oc = 0; oc < l.out_ch; ++oc)
                        for (int ic = 0; ic < l.in_ch; ++ic) ++count;
            break;
        case LayerKind::AttentionScore: {
            const int tokens = l.h * l.w;
            for (int head = 0; head < l.heads; ++head)
                for (int q = 0; q < tokens; ++q)
                    for (int k = 0; k < tokens; ++k)
                        for (int d = 0; d < l.head_dim; ++d) ++count;
            break;
        }
        case LayerKind::AttentionContext: {
            const int tokens = l.h * l.w;
            for (int head = 0; head < l.heads; ++head)
                for (int t = 0; t < tokens; ++t)
                    for (int d = 0; d < l.head_dim; ++d)
                        for (int k = 0; k < tokens; ++k) ++count;
            for (int t = 0; t < tokens; ++t)           // projection back
                for (int oc = 0; oc < l.out_ch; ++oc)
                    for (int ic = 0; ic < l.in_ch; ++ic) ++count;
            break;
        }
        case LayerKind::Elementwise:
            break;
    }
    return count;
}

// Access counting by walking the output/ tap tiling instead of ceil
// arithmetic.
inline uint64_t cim_accesses(const LayerSpec& l,
                             const hetnas::costmodel::CimConfig& cim) {
    int64_t positions, out_extent, taps;
    switch (l.kind) {
        case LayerKind::DepthwiseConv2d:
            positions = int64_t(l.out_h()) * l.out_w();
            out_extent = l.out_ch;
            taps = l.kh * l.kw;
            break;
        case LayerKind::PointwiseConv2d:
        case LayerKind::FullyConnected:
            positions = int64_t(l.out_h()) * l.out_w();
            out_extent = l.out_ch;
            taps = l.in_ch;
            break;
        case LayerKind::AttentionQKVGen:
        case LayerKind::MLPLinear:
            positions = int64_t(l.h) * l.w;
            out_extent = l.out_ch;
            taps = l.in_ch;
            break;
        case LayerKind::Conv2d:
            positions = int64_t(l.out_h()) * l.out_w();
            out_extent = l.out_ch;
            taps = int64_t(l.in_ch) * l.kh * l.kw;
            break;
        default:
            return 0;
    }
    uint64_t accesses = 0;
    for (int64_t p = 0; p < positions; ++p)
        for (int64_t oc = 0; oc < out_extent; oc += cim.accums_per_access)
            for (int64_t t = 0; t < taps; t += cim.products_per_access) ++accesses;
    return accesses;
}

// Bitmap-based unique-read counting (the implementation uses hash sets).
inline uint64_t unique_reads(const hetnas::cimsim::DedupConfig& cfg) {
    using hetnas::cimsim::GroupLayout;
    const int oh = cfg.out_h(), ow = cfg.out_w();
    std::vector<std::vector<std::pair<int, int>>> groups;
    if (cfg.layout == GroupLayout::Row) {
        for (int oy = 0; oy < oh; ++oy)
            for (int ox0 = 0; ox0 < ow; ox0 += cfg.cu_count) {
                groups.emplace_back();
                for (int i = 0; i < cfg.cu_count && ox0 + i < ow; ++i)
                    groups.back().emplace_back(oy, ox0 + i);
            }
    } else {
        for (int oy0 = 0; oy0 < oh; oy0 += cfg.tile_rows)
            for (int ox0 = 0; ox0 < ow; ox0 += cfg.tile_cols) {
                groups.emplace_back();
                for (int dy = 0; dy < cfg.tile_rows && oy0 + dy < oh; ++dy)
                    for (int dx = 0; dx < cfg.tile_cols && ox0 + dx < ow; ++dx)
                        groups.back().emplace_back(oy0 + dy, ox0 + dx);
            }
    }
    uint64_t total = 0;
    for (const auto& group : groups) {
        std::vector<uint8_t> mark(size_t(cfg.input_h) * cfg.input_w, 0);
        for (const auto& [oy, ox] : group)
            for (int dy = 0; dy < cfg.kh; ++dy)
                for (int dx = 0; dx < cfg.kw; ++dx)
                    mark[size_t(oy * cfg.stride + dy) * cfg.input_w +
                         ox * cfg.stride + dx] = 1;
        for (uint8_t m : mark) total += m;
    }
    return total;
}

}  // namespace oracles

#endif  // HETNAS_TESTS_ORACLES_HPP

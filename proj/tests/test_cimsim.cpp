#include <doctest.h>

#include <cmath>
#include <random>

#include "hetnas/cimsim.hpp"
#include "hetnas/errors.hpp"
#include "oracles.hpp"

using namespace hetnas;
using namespace hetnas::cimsim;
using netir::LayerKind;
using netir::LayerSpec;

namespace {

DedupConfig row_cfg(int input_h, int input_w, int cu, int k = 3, int stride = 1) {
    DedupConfig cfg;
    cfg.kh = k;
    cfg.kw = k;
    cfg.stride = stride;
    cfg.input_h = input_h;
    cfg.input_w = input_w;
    cfg.cu_count = cu;
    cfg.layout = GroupLayout::Row;
    return cfg;
}

}  // namespace

TEST_CASE("single full row group of four") {
    // 3x6 input, 3x3 kernel, stride 1 -> one output row of 4.
    const DedupConfig cfg = row_cfg(3, 6, 4);
    CHECK(naive_reads(cfg) == 36);
    CHECK(unique_reads(cfg) == 18);  // 3 rows x (4 + 2) columns
    CHECK(unique_reads(cfg) == oracles::unique_reads(cfg));
    CHECK(reduction_ratio(cfg) == doctest::Approx(0.5));
}

TEST_CASE("group of two reaches one third") {
    const DedupConfig cfg = row_cfg(3, 4, 2);
    CHECK(naive_reads(cfg) == 18);
    CHECK(unique_reads(cfg) == 12);
    CHECK(unique_reads(cfg) == oracles::unique_reads(cfg));
    CHECK(reduction_ratio(cfg) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("large groups approach the two-thirds limit") {
    const DedupConfig cfg = row_cfg(3, 1002, 1000);
    const double r = reduction_ratio(cfg);
    CHECK(std::abs(r - 2.0 / 3.0) < 1e-3);
    CHECK(r == doctest::Approx(row_reduction_closed_form(1000)));
}

TEST_CASE("one compute unit shares nothing") {
    const DedupConfig cfg = row_cfg(8, 8, 1);
    CHECK(unique_reads(cfg) == naive_reads(cfg));
    CHECK(reduction_ratio(cfg) == 0.0);
}

TEST_CASE("1x1 kernels never overlap") {
    for (int stride : {1, 2, 3}) {
        DedupConfig cfg = row_cfg(8, 8, 4, 1, stride);
        const uint64_t outputs = static_cast<uint64_t>(cfg.out_h()) * cfg.out_w();
        CHECK(naive_reads(cfg) == outputs);
        CHECK(unique_reads(cfg) == outputs);
    }
}

TEST_CASE("closed form matches enumeration for all full group sizes") {
    for (int n = 1; n <= 64; ++n) {
        const DedupConfig cfg = row_cfg(3, n + 2, n);  // exactly one group
        REQUIRE(cfg.out_w() == n);
        CHECK(reduction_ratio(cfg) ==
              doctest::Approx(row_reduction_closed_form(n)).epsilon(1e-12));
    }
}

TEST_CASE("reduction grows with group size and stays below two thirds") {
    double prev = -1.0;
    for (int n : {1, 2, 4, 8, 16, 32, 64}) {
        const double r = reduction_ratio(row_cfg(3, n + 2, n));
        CHECK(r > prev);
        CHECK(r < 2.0 / 3.0);
        prev = r;
    }
}

TEST_CASE("stride 3 windows are disjoint") {
    const DedupConfig cfg = row_cfg(9, 27, 4, 3, 3);
    CHECK(reduction_ratio(cfg) == 0.0);
}

TEST_CASE("unique never exceeds naive over random configs") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 300; ++i) {
        DedupConfig cfg;
        cfg.kh = 1 + static_cast<int>(rng() % 4);
        cfg.kw = 1 + static_cast<int>(rng() % 4);
        cfg.stride = 1 + static_cast<int>(rng() % 3);
        cfg.input_h = cfg.kh + static_cast<int>(rng() % 12);
        cfg.input_w = cfg.kw + static_cast<int>(rng() % 12);
        cfg.cu_count = 1 + static_cast<int>(rng() % 6);
        if (rng() & 1) {
            cfg.layout = GroupLayout::Tile;
            cfg.tile_rows = 1 + static_cast<int>(rng() % 3);
            cfg.tile_cols = cfg.cu_count;
            cfg.cu_count = cfg.tile_rows * cfg.tile_cols;
        }
        const uint64_t u = unique_reads(cfg);
        CHECK(u <= naive_reads(cfg));
        REQUIRE(u == oracles::unique_reads(cfg));
    }
}

TEST_CASE("tile layout counts partial edge groups exactly") {
    DedupConfig cfg = row_cfg(5, 5, 4);  // 3x3 output grid
    cfg.layout = GroupLayout::Tile;
    cfg.tile_rows = 2;
    cfg.tile_cols = 2;
    CHECK(unique_reads(cfg) == oracles::unique_reads(cfg));
}

TEST_CASE("empty output grid is rejected") {
    DedupConfig cfg = row_cfg(2, 2, 4);  // smaller than the 3x3 kernel
    CHECK_THROWS_AS(naive_reads(cfg), EmptyOutput);
    CHECK_THROWS_AS(unique_reads(cfg), EmptyOutput);
}

TEST_CASE("dedup traffic factor") {
    LayerSpec dw{LayerKind::DepthwiseConv2d, 64, 64, 32, 32, 3, 3, 1};
    CHECK(dedup_traffic_factor(dw, 1) == 1.0);
    const double f = dedup_traffic_factor(dw, 4);
    CHECK(std::abs(f - 0.5) < 0.02);  // large-map row groups of 4
    CHECK(dedup_traffic_factor(dw, 4) == f);  // memoized result is stable

    LayerSpec pw{LayerKind::PointwiseConv2d, 64, 64, 32, 32, 1, 1, 1};
    CHECK(dedup_traffic_factor(pw, 4) == 1.0);
}

TEST_CASE("area model") {
    CHECK(total_area(1) == 1.0);
    CHECK(total_area(4) == 1.42);  // 1 + 3 * 0.14, exact
    CHECK(total_area(2) == 1.14);

    // Strictly increasing and affine in the CU count.
    double prev = total_area(1);
    const double slope = total_area(2) - total_area(1);
    for (int n = 2; n <= 16; ++n) {
        const double a = total_area(n);
        CHECK(a > prev);
        CHECK(a - prev == doctest::Approx(slope).epsilon(1e-12));
        prev = a;
    }

    const auto [memory_mm2, periph_mm2] = macro_area_report();
    CHECK(memory_mm2 == 0.9);
    CHECK(periph_mm2 == 0.15);

    CHECK(AreaModel{}.bitcell_area_um2 == 0.0063);
    CHECK(kIfmpOverheadBoundPercent == 0.1);
    CHECK_THROWS_AS(total_area(0), ValidationError);
}

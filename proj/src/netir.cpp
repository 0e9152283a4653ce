#include "hetnas/netir.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hetnas/errors.hpp"

namespace hetnas::netir {

const char* to_string(BlockKind kind) {
    switch (kind) {
        case BlockKind::PlainConv: return "PlainConv";
        case BlockKind::MBConv:    return "MBConv";
        case BlockKind::ViT:       return "ViT";
        case BlockKind::MBPool:    return "MBPool";
    }
    return "?";
}

const char* to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv2d:           return "Conv2d";
        case LayerKind::DepthwiseConv2d:  return "DepthwiseConv2d";
        case LayerKind::PointwiseConv2d:  return "PointwiseConv2d";
        case LayerKind::FullyConnected:   return "FullyConnected";
        case LayerKind::AttentionQKVGen:  return "AttentionQKVGen";
        case LayerKind::AttentionScore:   return "AttentionScore";
        case LayerKind::AttentionContext: return "AttentionContext";
        case LayerKind::MLPLinear:        return "MLPLinear";
        case LayerKind::Elementwise:      return "Elementwise";
    }
    return "?";
}

LayerKind layer_kind_from_string(const std::string& name) {
    static const std::pair<const char*, LayerKind> table[] = {
        {"Conv2d", LayerKind::Conv2d},
        {"DepthwiseConv2d", LayerKind::DepthwiseConv2d},
        {"PointwiseConv2d", LayerKind::PointwiseConv2d},
        {"FullyConnected", LayerKind::FullyConnected},
        {"AttentionQKVGen", LayerKind::AttentionQKVGen},
        {"AttentionScore", LayerKind::AttentionScore},
        {"AttentionContext", LayerKind::AttentionContext},
        {"MLPLinear", LayerKind::MLPLinear},
        {"Elementwise", LayerKind::Elementwise},
    };
    for (const auto& [n, k] : table)
        if (name == n) return k;
    throw ParseError("unknown layer kind: " + name);
}

int IntRange::clamp_to_grid(int v) const {
    if (v <= lo) return lo;
    if (v >= hi) return hi;
    int k = (v - lo + step / 2) / step;
    return lo + k * step;
}

int RatioRange::count() const {
    return static_cast<int>(std::llround((hi - lo) / step)) + 1;
}

int RatioRange::index_of(double v) const {
    if (step <= 0.0) return v == lo ? 0 : -1;
    int k = static_cast<int>(std::llround((v - lo) / step));
    if (k < 0 || k >= count()) return -1;
    return value_at(k) == v ? k : -1;
}

bool RatioRange::contains(double v) const { return index_of(v) >= 0; }

// ---------------------------------------------------------------------------
// Space construction and validation
// ---------------------------------------------------------------------------

namespace {

BlockSpec conv0(int wlo, int whi) {
    return {"Conv-0", BlockKind::PlainConv, {wlo, whi, 8}, {1, 1, 1}, {1.0, 1.0, 1.0}, 2};
}

BlockSpec mbconv(std::string name, int wlo, int whi, int dlo, int dhi,
                 double elo, double ehi, int stride) {
    return {std::move(name), BlockKind::MBConv, {wlo, whi, 8}, {dlo, dhi, 1},
            {elo, ehi, 1.0}, stride};
}

BlockSpec vit(std::string name, int wlo, int whi, int dlo, int dhi) {
    return {std::move(name), BlockKind::ViT, {wlo, whi, 8}, {dlo, dhi, 1},
            {1.0, 2.0, 0.5}, 1};
}

}  // namespace

SearchSpace default_space() {
    SearchSpace s;
    s.blocks = {
        conv0(16, 32),
        mbconv("MBConv-1", 16, 32, 1, 2, 1, 1, 1),
        mbconv("MBConv-2", 32, 64, 2, 6, 4, 6, 2),
        mbconv("MBConv-3", 32, 64, 2, 6, 4, 6, 2),
        vit("ViT-3", 24, 64, 0, 1),
        mbconv("MBConv-4-1", 64, 96, 1, 3, 4, 6, 2),
        vit("ViT-4-1", 48, 96, 0, 2),
        mbconv("MBConv-4-2", 64, 96, 0, 3, 4, 6, 1),
        vit("ViT-4-2", 48, 96, 0, 2),
        mbconv("MBConv-5-1", 96, 128, 3, 4, 4, 6, 1),
        vit("ViT-5-1", 64, 128, 0, 2),
        mbconv("MBConv-5-2", 96, 128, 0, 4, 4, 6, 1),
        vit("ViT-5-2", 64, 128, 0, 2),
        mbconv("MBConv-6-1", 192, 224, 2, 4, 4, 6, 2),
        vit("ViT-6-1", 144, 224, 0, 2),
        mbconv("MBConv-6-2", 192, 224, 0, 4, 4, 6, 1),
        vit("ViT-6-2", 144, 224, 0, 2),
        mbconv("MBConv-7", 224, 240, 1, 2, 6, 6, 1),
        vit("ViT-7", 176, 240, 0, 3),
        {"MBPool", BlockKind::MBPool, {1792, 1984, 8}, {1, 1, 1}, {6.0, 6.0, 1.0}, 1},
    };
    s.resolutions = {192, 224, 256, 288};
    return s;
}

std::vector<std::string> space_violations(const SearchSpace& space) {
    std::vector<std::string> bad;
    auto complain = [&](const std::string& msg) { bad.push_back(msg); };

    if (space.blocks.empty()) complain("space has no blocks");
    if (space.resolutions.empty()) complain("space has no resolutions");
    for (size_t i = 0; i + 1 < space.resolutions.size(); ++i)
        if (space.resolutions[i] >= space.resolutions[i + 1])
            complain("resolutions must be strictly ascending");
    for (int r : space.resolutions)
        if (r < 8) complain("resolution below 8: " + std::to_string(r));

    for (size_t i = 0; i < space.blocks.size(); ++i) {
        const BlockSpec& b = space.blocks[i];
        const std::string& n = b.name;
        if (n.empty()) complain("block " + std::to_string(i) + " has no name");
        if (b.width.lo <= 0) complain(n + ": widths must be positive");
        if (b.width.lo > b.width.hi) complain(n + ": width min > max");
        if (b.width.step <= 0 || (b.width.hi - b.width.lo) % b.width.step != 0)
            complain(n + ": width step does not divide range");
        if (b.depth.lo > b.depth.hi) complain(n + ": depth min > max");
        if (b.depth.lo < 0) complain(n + ": negative depth");
        if (b.depth.step != 1) complain(n + ": depth step must be 1");
        if (b.exp.lo > b.exp.hi) complain(n + ": exp min > max");
        if (b.exp.lo <= 0) complain(n + ": exp must be positive");
        if (b.exp.lo < b.exp.hi && b.exp.index_of(b.exp.hi) < 0)
            complain(n + ": exp step does not divide range");
        if (b.stride != 1 && b.stride != 2)
            complain(n + ": stride must be 1 or 2");
        switch (b.kind) {
            case BlockKind::PlainConv:
                if (i != 0) complain(n + ": PlainConv only allowed first");
                if (b.depth.lo < 1) complain(n + ": PlainConv depth must be >= 1");
                break;
            case BlockKind::ViT:
                if (i == 0 || space.blocks[i - 1].kind != BlockKind::MBConv)
                    complain(n + ": ViT block must follow an MBConv block");
                if (b.width.lo % kHeadDim != 0 || b.width.step % kHeadDim != 0)
                    complain(n + ": ViT widths must be multiples of the head dim");
                break;
            case BlockKind::MBPool:
                if (i + 1 != space.blocks.size())
                    complain(n + ": MBPool must be the last block");
                if (b.depth.lo != 1 || b.depth.hi != 1)
                    complain(n + ": MBPool depth is fixed at 1");
                break;
            case BlockKind::MBConv:
                if (i == 0) complain(n + ": first block must be PlainConv");
                break;
        }
    }
    if (!space.blocks.empty() && space.blocks.front().kind != BlockKind::PlainConv)
        complain("first block must be PlainConv");
    return bad;
}

void require_valid_space(const SearchSpace& space) {
    auto bad = space_violations(space);
    if (!bad.empty()) throw ValidationError("invalid space: " + bad.front());
}

// ---------------------------------------------------------------------------
// Choices
// ---------------------------------------------------------------------------

SubnetChoice smallest_subnet(const SearchSpace& space) {
    require_valid_space(space);
    SubnetChoice c;
    for (const BlockSpec& b : space.blocks)
        c.blocks.push_back({b.width.lo, b.depth.lo, b.exp.lo});
    c.resolution = space.resolutions.front();
    return c;
}

SubnetChoice largest_subnet(const SearchSpace& space) {
    require_valid_space(space);
    SubnetChoice c;
    for (const BlockSpec& b : space.blocks)
        c.blocks.push_back({b.width.hi, b.depth.hi, b.exp.hi});
    c.resolution = space.resolutions.back();
    return c;
}

uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                           std::numeric_limits<uint64_t>::max() % n;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

SubnetChoice sample_random(const SearchSpace& space, std::mt19937_64& rng) {
    SubnetChoice c;
    for (const BlockSpec& b : space.blocks) {
        BlockChoice bc;
        bc.width = b.width.lo + static_cast<int>(uniform_below(rng, b.width.count())) * b.width.step;
        bc.depth = b.depth.lo + static_cast<int>(uniform_below(rng, b.depth.count()));
        bc.exp = b.exp.value_at(static_cast<int>(uniform_below(rng, b.exp.count())));
        c.blocks.push_back(bc);
    }
    c.resolution = space.resolutions[uniform_below(rng, space.resolutions.size())];
    return c;
}

SubnetChoice sample_random(const SearchSpace& space, uint64_t seed) {
    require_valid_space(space);
    std::mt19937_64 rng(seed);
    return sample_random(space, rng);
}

std::vector<Violation> validate(const SearchSpace& space, const SubnetChoice& choice) {
    std::vector<Violation> v;
    if (choice.blocks.size() != space.blocks.size()) {
        v.push_back({"<space>", "blocks",
                     "choice has " + std::to_string(choice.blocks.size()) +
                         " blocks, space has " + std::to_string(space.blocks.size())});
        return v;
    }
    for (size_t i = 0; i < space.blocks.size(); ++i) {
        const BlockSpec& b = space.blocks[i];
        const BlockChoice& c = choice.blocks[i];
        if (!b.width.contains(c.width))
            v.push_back({b.name, "width",
                         std::to_string(c.width) + " not in [" + std::to_string(b.width.lo) +
                             "," + std::to_string(b.width.hi) + "] step " +
                             std::to_string(b.width.step)});
        if (!b.depth.contains(c.depth))
            v.push_back({b.name, "depth",
                         std::to_string(c.depth) + " not in [" + std::to_string(b.depth.lo) +
                             "," + std::to_string(b.depth.hi) + "]"});
        if (!b.exp.contains(c.exp)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%g not on exp grid [%g,%g] step %g",
                          c.exp, b.exp.lo, b.exp.hi, b.exp.step);
            v.push_back({b.name, "exp", buf});
        }
    }
    if (std::find(space.resolutions.begin(), space.resolutions.end(), choice.resolution) ==
        space.resolutions.end())
        v.push_back({"resolution", "resolution",
                     std::to_string(choice.resolution) + " not in the resolution set"});
    return v;
}

std::string choice_key(const SubnetChoice& choice, const SearchSpace& space) {
    std::string key = "r" + std::to_string(choice.resolution);
    for (size_t i = 0; i < choice.blocks.size(); ++i) {
        const BlockChoice& c = choice.blocks[i];
        char buf[96];
        const char* name = i < space.blocks.size() ? space.blocks[i].name.c_str() : "?";
        std::snprintf(buf, sizeof buf, "|%s:w%dd%de%.1f", name, c.width, c.depth, c.exp);
        key += buf;
    }
    return key;
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

namespace {

struct Builder {
    Network net;
    int h, w, ch;

    void push(LayerSpec layer) {
        net.layers.push_back(layer);
        h = layer.out_h();
        w = layer.out_w();
        ch = layer.out_ch;
    }

    int last_index() const { return static_cast<int>(net.layers.size()) - 1; }

    // One IRB unit: optional expand pwconv, 3x3 dwconv, project pwconv.
    void irb(int out_ch, double exp, int stride) {
        const int in = ch;
        const int hidden = static_cast<int>(std::llround(in * exp));
        const int first = static_cast<int>(net.layers.size());
        if (hidden != in)
            push({LayerKind::PointwiseConv2d, h, w, in, hidden, 1, 1, 1});
        push({LayerKind::DepthwiseConv2d, h, w, hidden, hidden, 3, 3, stride});
        push({LayerKind::PointwiseConv2d, h, w, hidden, out_ch, 1, 1, 1});
        if (stride == 1 && in == out_ch)
            net.residuals.emplace_back(first, last_index());
    }

    // One transformer encoder: QKV generation, score, context (attn*V plus
    // the projection back to the block channels), then the two MLP linears.
    void vit_encoder(int qkv_width, double mlp_exp) {
        const int c = ch;
        const int heads = qkv_width / kHeadDim;
        const int mlp_hidden = static_cast<int>(std::llround(c * mlp_exp));
        const int first = static_cast<int>(net.layers.size());
        push({LayerKind::AttentionQKVGen, h, w, c, 3 * qkv_width, 1, 1, 1, heads});
        push({LayerKind::AttentionScore, h, w, 3 * qkv_width, qkv_width, 1, 1, 1, heads});
        push({LayerKind::AttentionContext, h, w, qkv_width, c, 1, 1, 1, heads});
        net.residuals.emplace_back(first, last_index());
        const int mlp_first = static_cast<int>(net.layers.size());
        push({LayerKind::MLPLinear, h, w, c, mlp_hidden, 1, 1, 1});
        push({LayerKind::MLPLinear, h, w, mlp_hidden, c, 1, 1, 1});
        net.residuals.emplace_back(mlp_first, last_index());
    }

    // Efficient last stage: expand, global average pool, two FC layers.
    void mbpool(int width, double exp) {
        const int in = ch;
        const int hidden = static_cast<int>(std::llround(in * exp));
        push({LayerKind::PointwiseConv2d, h, w, in, hidden, 1, 1, 1});
        push({LayerKind::Elementwise, h, w, hidden, hidden, h, w, std::max(h, w)});
        push({LayerKind::FullyConnected, 1, 1, hidden, width, 1, 1, 1});
        push({LayerKind::FullyConnected, 1, 1, width, kNumClasses, 1, 1, 1});
    }
};

}  // namespace

Network materialize(const SearchSpace& space, const SubnetChoice& choice) {
    auto bad = validate(space, choice);
    if (!bad.empty())
        throw InvalidChoice("invalid choice: " + bad.front().block + "/" +
                            bad.front().field + ": " + bad.front().message);

    Builder b{{}, choice.resolution, choice.resolution, 3};
    for (size_t i = 0; i < space.blocks.size(); ++i) {
        const BlockSpec& spec = space.blocks[i];
        const BlockChoice& c = choice.blocks[i];
        if (c.depth == 0) continue;
        switch (spec.kind) {
            case BlockKind::PlainConv:
                for (int d = 0; d < c.depth; ++d)
                    b.push({LayerKind::Conv2d, b.h, b.w, b.ch, c.width, 3, 3,
                            d == 0 ? spec.stride : 1});
                break;
            case BlockKind::MBConv:
                for (int d = 0; d < c.depth; ++d)
                    b.irb(c.width, c.exp, d == 0 ? spec.stride : 1);
                break;
            case BlockKind::ViT:
                for (int d = 0; d < c.depth; ++d)
                    b.vit_encoder(c.width, c.exp);
                break;
            case BlockKind::MBPool:
                b.mbpool(c.width, c.exp);
                break;
        }
    }
    return b.net;
}

std::vector<std::string> chain_violations(const Network& net) {
    std::vector<std::string> bad;
    for (size_t i = 0; i + 1 < net.layers.size(); ++i) {
        const LayerSpec& a = net.layers[i];
        const LayerSpec& b = net.layers[i + 1];
        if (a.out_ch != b.in_ch)
            bad.push_back("layer " + std::to_string(i) + " out_ch " +
                          std::to_string(a.out_ch) + " != layer " +
                          std::to_string(i + 1) + " in_ch " + std::to_string(b.in_ch));
        if (a.out_h() != b.h || a.out_w() != b.w)
            bad.push_back("layer " + std::to_string(i) + " spatial mismatch");
    }
    for (const auto& [from, to] : net.residuals) {
        if (from < 0 || to >= static_cast<int>(net.layers.size()) || from > to) {
            bad.push_back("residual edge out of range");
            continue;
        }
        if (net.layers[from].in_ch != net.layers[to].out_ch)
            bad.push_back("residual edge changes channel count");
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Workload arithmetic
// ---------------------------------------------------------------------------

uint64_t count_macs(const LayerSpec& l) {
    const uint64_t oh = l.out_h(), ow = l.out_w();
    const uint64_t tokens = static_cast<uint64_t>(l.h) * l.w;
    switch (l.kind) {
        case LayerKind::Conv2d:
            return oh * ow * l.out_ch * l.in_ch * l.kh * l.kw;
        case LayerKind::DepthwiseConv2d:
            return oh * ow * l.out_ch * l.kh * l.kw;
        case LayerKind::PointwiseConv2d:
            return oh * ow * l.out_ch * l.in_ch;
        case LayerKind::FullyConnected:
            return oh * ow * static_cast<uint64_t>(l.in_ch) * l.out_ch;
        case LayerKind::AttentionQKVGen:
            return tokens * l.in_ch * l.out_ch;
        case LayerKind::AttentionScore:
            // Q*K^T per head: tokens^2 dot products of length head_dim.
            return static_cast<uint64_t>(l.heads) * tokens * tokens * l.head_dim;
        case LayerKind::AttentionContext:
            // attn*V per head plus the projection back to out_ch.
            return static_cast<uint64_t>(l.heads) * tokens * tokens * l.head_dim +
                   tokens * l.in_ch * l.out_ch;
        case LayerKind::MLPLinear:
            return tokens * l.in_ch * l.out_ch;
        case LayerKind::Elementwise:
            return 0;
    }
    return 0;
}

uint64_t count_params(const LayerSpec& l) {
    switch (l.kind) {
        case LayerKind::Conv2d:
            return static_cast<uint64_t>(l.kh) * l.kw * l.in_ch * l.out_ch;
        case LayerKind::DepthwiseConv2d:
            return static_cast<uint64_t>(l.kh) * l.kw * l.out_ch;
        case LayerKind::PointwiseConv2d:
        case LayerKind::FullyConnected:
        case LayerKind::AttentionQKVGen:
        case LayerKind::MLPLinear:
            return static_cast<uint64_t>(l.in_ch) * l.out_ch;
        case LayerKind::AttentionScore:
            return 0;  // activation-activation matmul
        case LayerKind::AttentionContext:
            return static_cast<uint64_t>(l.in_ch) * l.out_ch;  // projection only
        case LayerKind::Elementwise:
            return 0;
    }
    return 0;
}

Traffic count_traffic(const LayerSpec& l) {
    const uint64_t tokens = static_cast<uint64_t>(l.h) * l.w;
    const uint64_t out_px = static_cast<uint64_t>(l.out_h()) * l.out_w();
    Traffic t;
    t.weight_bytes = count_params(l);
    switch (l.kind) {
        case LayerKind::AttentionScore: {
            const int qkv = l.out_ch;
            t.input_bytes = 2 * tokens * qkv;                       // Q and K
            t.output_bytes = static_cast<uint64_t>(l.heads) * tokens * tokens;
            break;
        }
        case LayerKind::AttentionContext: {
            t.input_bytes = static_cast<uint64_t>(l.heads) * tokens * tokens +
                            tokens * l.in_ch;                       // attn map and V
            t.output_bytes = tokens * l.out_ch;
            break;
        }
        default:
            t.input_bytes = tokens * l.in_ch;
            t.output_bytes = out_px * l.out_ch;
            break;
    }
    return t;
}

uint64_t network_macs(const Network& net) {
    uint64_t total = 0;
    for (const LayerSpec& l : net.layers) total += count_macs(l);
    return total;
}

// ---------------------------------------------------------------------------
// Cardinality
// ---------------------------------------------------------------------------

namespace {

constexpr unsigned __int128 kU128Max = ~static_cast<unsigned __int128>(0);

void mul_saturating(unsigned __int128& acc, uint64_t m, bool& saturated) {
    if (m == 0) { acc = 0; return; }
    if (acc > kU128Max / m) {
        acc = kU128Max;
        saturated = true;
    } else {
        acc *= m;
    }
}

}  // namespace

std::string Cardinality::str() const {
    if (value == 0) return "0";
    std::string digits;
    unsigned __int128 v = value;
    while (v > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return saturated ? ">=" + digits : digits;
}

bool Cardinality::fits_u64() const {
    return !saturated && value <= std::numeric_limits<uint64_t>::max();
}

uint64_t Cardinality::as_u64() const {
    return fits_u64() ? static_cast<uint64_t>(value)
                      : std::numeric_limits<uint64_t>::max();
}

Cardinality space_cardinality(const SearchSpace& space) {
    require_valid_space(space);
    Cardinality c{1, false};
    for (const BlockSpec& b : space.blocks) {
        mul_saturating(c.value, b.width.count(), c.saturated);
        mul_saturating(c.value, b.depth.count(), c.saturated);
        mul_saturating(c.value, b.exp.count(), c.saturated);
    }
    mul_saturating(c.value, space.resolutions.size(), c.saturated);
    return c;
}

std::vector<int> dimension_counts(const SearchSpace& space) {
    std::vector<int> n;
    for (const BlockSpec& b : space.blocks) {
        n.push_back(b.width.count());
        n.push_back(b.depth.count());
        n.push_back(b.exp.count());
    }
    n.push_back(static_cast<int>(space.resolutions.size()));
    return n;
}

SubnetChoice choice_from_indices(const SearchSpace& space, const std::vector<int>& idx) {
    SubnetChoice c;
    size_t k = 0;
    for (const BlockSpec& b : space.blocks) {
        BlockChoice bc;
        bc.width = b.width.lo + idx.at(k++) * b.width.step;
        bc.depth = b.depth.lo + idx.at(k++);
        bc.exp = b.exp.value_at(idx.at(k++));
        c.blocks.push_back(bc);
    }
    c.resolution = space.resolutions.at(idx.at(k));
    return c;
}

}  // namespace hetnas::netir

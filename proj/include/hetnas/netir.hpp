#ifndef HETNAS_NETIR_HPP
#define HETNAS_NETIR_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hetnas::netir {

// ---------------------------------------------------------------------------
// Search space
// ---------------------------------------------------------------------------

enum class BlockKind { PlainConv, MBConv, ViT, MBPool };

const char* to_string(BlockKind kind);

// Inclusive integer range on a fixed step grid.
struct IntRange {
    int lo = 0;
    int hi = 0;
    int step = 1;

    int count() const { return (hi - lo) / step + 1; }
    bool contains(int v) const {
        return v >= lo && v <= hi && (v - lo) % step == 0;
    }
    int clamp_to_grid(int v) const;
};

// Inclusive range of expansion ratios. Steps are multiples of 0.5 so all
// grid values are exact in binary floating point.
struct RatioRange {
    double lo = 1.0;
    double hi = 1.0;
    double step = 1.0;

    int count() const;
    double value_at(int index) const { return lo + index * step; }
    bool contains(double v) const;
    int index_of(double v) const;  // -1 when off grid
};

struct BlockSpec {
    std::string name;
    BlockKind kind = BlockKind::MBConv;
    IntRange width;        // output channels (MBConv) or Q/K/V width (ViT)
    IntRange depth;        // layers per block; ViT and some MBConv allow 0
    RatioRange exp;        // IRB expansion or ViT MLP ratio; singleton = fixed
    int stride = 1;        // applied to the first layer of the block only
};

struct SearchSpace {
    std::vector<BlockSpec> blocks;
    std::vector<int> resolutions;  // square input sizes, ascending
};

// Structural problems with a space itself (bad ranges, ordering, ...).
std::vector<std::string> space_violations(const SearchSpace& space);
void require_valid_space(const SearchSpace& space);  // throws ValidationError

// The 20-block hybrid space with resolutions {192, 224, 256, 288}.
SearchSpace default_space();

// ---------------------------------------------------------------------------
// Subnet choices
// ---------------------------------------------------------------------------

struct BlockChoice {
    int width = 0;
    int depth = 0;
    double exp = 1.0;
};

struct SubnetChoice {
    std::vector<BlockChoice> blocks;  // one per space block, same order
    int resolution = 0;
};

struct Violation {
    std::string block;   // block name or "resolution"
    std::string field;   // "width" | "depth" | "exp" | "resolution"
    std::string message;
};

SubnetChoice smallest_subnet(const SearchSpace& space);
SubnetChoice largest_subnet(const SearchSpace& space);
SubnetChoice sample_random(const SearchSpace& space, uint64_t seed);
SubnetChoice sample_random(const SearchSpace& space, std::mt19937_64& rng);

// Unbiased draw in [0, n); avoids std::uniform_int_distribution so the
// sequence is identical across standard libraries.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t n);

std::vector<Violation> validate(const SearchSpace& space, const SubnetChoice& choice);

// Canonical one-line key, e.g. "r192|Conv-0:w16d1e1.0|...". Used for
// dedup, memoization and the lookup-surrogate CSV.
std::string choice_key(const SubnetChoice& choice, const SearchSpace& space);

// ---------------------------------------------------------------------------
// Layer-level IR
// ---------------------------------------------------------------------------

enum class LayerKind {
    Conv2d,
    DepthwiseConv2d,
    PointwiseConv2d,
    FullyConnected,
    AttentionQKVGen,
    AttentionScore,
    AttentionContext,
    MLPLinear,
    Elementwise,
};

const char* to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

inline constexpr int kHeadDim = 8;
inline constexpr int kNumClasses = 1000;

// One layer. `h`/`w` are the *input* spatial size; the output size is
// ceil(h/stride) x ceil(w/stride) ("same" padding throughout). Attention
// layers use h*w as the token count; their channel fields chain as
//   QKVGen: C -> 3W, Score: 3W -> W, Context: W -> C (attn*V plus the
//   output projection), MLPLinear x2: C -> eC -> C.
struct LayerSpec {
    LayerKind kind = LayerKind::Conv2d;
    int h = 1;
    int w = 1;
    int in_ch = 1;
    int out_ch = 1;
    int kh = 1;
    int kw = 1;
    int stride = 1;
    int heads = 0;          // attention kinds only
    int head_dim = kHeadDim;

    int out_h() const { return (h + stride - 1) / stride; }
    int out_w() const { return (w + stride - 1) / stride; }
};

struct Network {
    std::vector<LayerSpec> layers;
    // Cost-free skip edges: (first layer index, last layer index) of the
    // residual span.
    std::vector<std::pair<int, int>> residuals;
};

// Expands a validated choice into the layer sequence. Throws InvalidChoice
// if validate() is nonempty.
Network materialize(const SearchSpace& space, const SubnetChoice& choice);

// Empty list iff adjacent layers chain (channels match, spatial sizes
// propagate with stride).
std::vector<std::string> chain_violations(const Network& net);

// ---------------------------------------------------------------------------
// Workload arithmetic (8-bit tensors)
// ---------------------------------------------------------------------------

struct Traffic {
    uint64_t input_bytes = 0;
    uint64_t weight_bytes = 0;
    uint64_t output_bytes = 0;
};

uint64_t count_macs(const LayerSpec& layer);
uint64_t count_params(const LayerSpec& layer);
Traffic count_traffic(const LayerSpec& layer);

uint64_t network_macs(const Network& net);

// ---------------------------------------------------------------------------
// Cardinality
// ---------------------------------------------------------------------------

// Saturating 128-bit product over all per-block choice counts and the
// resolution set.
struct Cardinality {
    unsigned __int128 value = 0;
    bool saturated = false;

    std::string str() const;
    bool fits_u64() const;
    uint64_t as_u64() const;  // saturates at UINT64_MAX
};

Cardinality space_cardinality(const SearchSpace& space);

// Per-dimension choice counts, in choice-field order (width, depth, exp per
// block, then resolution). Used by exhaustive enumeration.
std::vector<int> dimension_counts(const SearchSpace& space);
SubnetChoice choice_from_indices(const SearchSpace& space, const std::vector<int>& idx);

}  // namespace hetnas::netir

#endif  // HETNAS_NETIR_HPP

#ifndef HETNAS_SEARCH_HPP
#define HETNAS_SEARCH_HPP

#include <cstdint>
#include <list>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hetnas/netir.hpp"
#include "hetnas/scheduler.hpp"

namespace hetnas::search {

using netir::SearchSpace;
using netir::SubnetChoice;
using scheduler::HardwareConfig;
using scheduler::Objective;

// ---------------------------------------------------------------------------
// Accuracy surrogates
// ---------------------------------------------------------------------------

// Stand-in for a trained supernet's accuracy signal. Deterministic; values
// in [0, 1].
class AccuracySurrogate {
public:
    virtual ~AccuracySurrogate() = default;
    virtual double evaluate(const SubnetChoice& choice,
                            const SearchSpace& space) const = 0;
    virtual std::string name() const = 0;
};

// Smooth monotone proxy: grows with total MACs, depth and resolution,
// with diminishing returns. Nested choices order consistently.
class SyntheticSurrogate final : public AccuracySurrogate {
public:
    double evaluate(const SubnetChoice& choice, const SearchSpace& space) const override;
    std::string name() const override { return "synthetic"; }
};

// choice_key -> accuracy table loaded from CSV (columns choice_key,accuracy).
class LookupTableSurrogate final : public AccuracySurrogate {
public:
    static LookupTableSurrogate from_csv(const std::string& csv_text);
    double evaluate(const SubnetChoice& choice, const SearchSpace& space) const override;
    std::string name() const override { return "lookup"; }

    std::map<std::string, double> table;
};

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

enum class ConstraintKind { None, MaxLatency, MaxEnergy };

struct EvolutionParams {
    int population = 256;
    int generations = 60;
    double mutation_rate = 0.1;
    double crossover_rate = 0.5;
    ConstraintKind constraint = ConstraintKind::None;
    double constraint_value = 0.0;
    uint64_t seed = 0;
    bool joint_three_objective = false;  // optimize latency and energy jointly
};

struct FrontPoint {
    SubnetChoice choice;
    double accuracy = 0.0;
    double latency_s = 0.0;
    double energy_nj = 0.0;
    std::string schedule_digest;
};

struct ParetoFront {
    std::vector<FrontPoint> points;  // nondominated, ascending objective
    Objective objective = Objective::Latency;
};

// ---------------------------------------------------------------------------
// Variation operators
// ---------------------------------------------------------------------------

// Each field moves to an adjacent grid value (one step up or down, clamped)
// independently with probability `rate`.
SubnetChoice mutate(const SubnetChoice& choice, const SearchSpace& space,
                    double rate, std::mt19937_64& rng);
SubnetChoice mutate(const SubnetChoice& choice, const SearchSpace& space,
                    double rate, uint64_t seed);

// Each block's fields come from a or b uniformly; resolution likewise.
SubnetChoice crossover(const SubnetChoice& a, const SubnetChoice& b,
                       const SearchSpace& space, std::mt19937_64& rng);
SubnetChoice crossover(const SubnetChoice& a, const SubnetChoice& b,
                       const SearchSpace& space, uint64_t seed);

// ---------------------------------------------------------------------------
// Evaluation (memoized)
// ---------------------------------------------------------------------------

struct EvalResult {
    double accuracy = 0.0;
    double latency_s = 0.0;
    double energy_nj = 0.0;
    std::string schedule_digest;
};

// Materialize + schedule + surrogate, memoized by canonical choice key with
// LRU eviction. Thread safe; results are pure so sharing across workers
// cannot change outputs. The surrogate must outlive the evaluator.
class Evaluator {
public:
    Evaluator(SearchSpace space, HardwareConfig hw,
              const AccuracySurrogate& surrogate, Objective objective,
              size_t cache_capacity = 1 << 16);

    EvalResult evaluate(const SubnetChoice& choice) const;
    size_t cache_hits() const { return hits_; }

private:
    SearchSpace space_;
    HardwareConfig hw_;
    const AccuracySurrogate& surrogate_;
    Objective objective_;
    size_t capacity_;

    mutable std::mutex mutex_;
    mutable std::list<std::string> lru_;
    mutable std::unordered_map<std::string,
                               std::pair<EvalResult, std::list<std::string>::iterator>>
        cache_;
    mutable size_t hits_ = 0;
};

// ---------------------------------------------------------------------------
// Front utilities
// ---------------------------------------------------------------------------

// Accuracy is maximized, the objective metric minimized. O(n log n) sweep;
// duplicate (accuracy, objective) pairs all survive.
std::vector<FrontPoint> pareto_front(std::vector<FrontPoint> points,
                                     Objective objective);

// Area dominated by the front relative to a worst-corner reference
// (accuracy lower bound, objective upper bound). Throws BadReference when
// any point falls outside the reference box.
double hypervolume(const std::vector<FrontPoint>& front, Objective objective,
                   double ref_accuracy, double ref_objective);

// ---------------------------------------------------------------------------
// The evolutionary loop
// ---------------------------------------------------------------------------

// NSGA-style multi-objective search seeded with the smallest, largest and
// random subnets. Deterministic for a fixed seed; candidate evaluation may
// fan out over `jobs` workers without affecting results.
ParetoFront evolve(const SearchSpace& space, const HardwareConfig& hw,
                   const AccuracySurrogate& surrogate, const EvolutionParams& params,
                   Objective objective, int jobs = 1);

// Exhaustive front for small spaces; throws TooLarge above `limit` choices.
ParetoFront brute_force_front(const SearchSpace& space, const HardwareConfig& hw,
                              const AccuracySurrogate& surrogate, Objective objective,
                              const EvolutionParams& params, uint64_t limit = 100000);

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

struct BlockMixRow {
    int n_vit_layers = 0;  // materialized transformer encoders
    int n_irb_layers = 0;  // materialized IRB units
    double ratio = 0.0;    // vit / irb, 0 when no encoders
};

std::vector<BlockMixRow> block_mix_report(const ParetoFront& front,
                                          const SearchSpace& space);

}  // namespace hetnas::search

#endif  // HETNAS_SEARCH_HPP

#include "hetnas/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "hetnas/errors.hpp"
#include "hetnas/io.hpp"

namespace hetnas::search {

using netir::BlockSpec;

// ---------------------------------------------------------------------------
// Surrogates
// ---------------------------------------------------------------------------

namespace {

// Strictly increasing with diminishing returns, maps [0,inf) into [0,1).
double saturate(double u) { return u / (1.0 + u); }

double next_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double SyntheticSurrogate::evaluate(const SubnetChoice& choice,
                                    const SearchSpace& space) const {
    const netir::Network net = netir::materialize(space, choice);
    const double macs = static_cast<double>(netir::network_macs(net));
    int total_depth = 0;
    for (const auto& b : choice.blocks) total_depth += b.depth;
    return 0.5 * saturate(std::log2(1.0 + macs) / 20.0) +
           0.3 * saturate(total_depth / 16.0) +
           0.2 * saturate(choice.resolution / 256.0);
}

LookupTableSurrogate LookupTableSurrogate::from_csv(const std::string& csv_text) {
    LookupTableSurrogate s;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("choice_key,accuracy", 0) != 0)
        throw ParseError("lookup CSV must start with header 'choice_key,accuracy'");
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const size_t comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ParseError("lookup CSV line " + std::to_string(lineno) +
                             " has no comma");
        try {
            s.table[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParseError("lookup CSV line " + std::to_string(lineno) +
                             " has a bad accuracy value");
        }
    }
    return s;
}

double LookupTableSurrogate::evaluate(const SubnetChoice& choice,
                                      const SearchSpace& space) const {
    const std::string key = netir::choice_key(choice, space);
    auto it = table.find(key);
    if (it == table.end())
        throw ValidationError("lookup surrogate has no accuracy for " + key);
    return it->second;
}

// ---------------------------------------------------------------------------
// Variation operators
// ---------------------------------------------------------------------------

namespace {

int step_index(int index, int count, std::mt19937_64& rng) {
    const int dir = (rng() & 1) ? 1 : -1;
    return std::clamp(index + dir, 0, count - 1);
}

}  // namespace

SubnetChoice mutate(const SubnetChoice& choice, const SearchSpace& space,
                    double rate, std::mt19937_64& rng) {
    SubnetChoice out = choice;
    for (size_t i = 0; i < space.blocks.size(); ++i) {
        const BlockSpec& b = space.blocks[i];
        netir::BlockChoice& c = out.blocks[i];
        if (next_double(rng) < rate) {
            const int idx = (c.width - b.width.lo) / b.width.step;
            c.width = b.width.lo + step_index(idx, b.width.count(), rng) * b.width.step;
        }
        if (next_double(rng) < rate) {
            const int idx = c.depth - b.depth.lo;
            c.depth = b.depth.lo + step_index(idx, b.depth.count(), rng);
        }
        if (next_double(rng) < rate) {
            const int idx = b.exp.index_of(c.exp);
            c.exp = b.exp.value_at(step_index(idx, b.exp.count(), rng));
        }
    }
    if (next_double(rng) < rate) {
        const auto& res = space.resolutions;
        const int idx = static_cast<int>(
            std::find(res.begin(), res.end(), out.resolution) - res.begin());
        out.resolution = res[step_index(idx, static_cast<int>(res.size()), rng)];
    }
    return out;
}

SubnetChoice mutate(const SubnetChoice& choice, const SearchSpace& space,
                    double rate, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return mutate(choice, space, rate, rng);
}

SubnetChoice crossover(const SubnetChoice& a, const SubnetChoice& b,
                       const SearchSpace& space, std::mt19937_64& rng) {
    SubnetChoice out = a;
    for (size_t i = 0; i < space.blocks.size(); ++i)
        out.blocks[i] = (rng() & 1) ? a.blocks[i] : b.blocks[i];
    out.resolution = (rng() & 1) ? a.resolution : b.resolution;
    return out;
}

SubnetChoice crossover(const SubnetChoice& a, const SubnetChoice& b,
                       const SearchSpace& space, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return crossover(a, b, space, rng);
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

Evaluator::Evaluator(SearchSpace space, HardwareConfig hw,
                     const AccuracySurrogate& surrogate, Objective objective,
                     size_t cache_capacity)
    : space_(std::move(space)),
      hw_(std::move(hw)),
      surrogate_(surrogate),
      objective_(objective),
      capacity_(std::max<size_t>(cache_capacity, 1)) {}

EvalResult Evaluator::evaluate(const SubnetChoice& choice) const {
    const std::string key = netir::choice_key(choice, space_);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            ++hits_;
            return it->second.first;
        }
    }

    const netir::Network net = netir::materialize(space_, choice);
    auto [schedule, report] = scheduler::schedule_network(net, hw_, objective_);
    EvalResult result;
    result.accuracy = surrogate_.evaluate(choice, space_);
    result.latency_s = report.total_latency_s;
    result.energy_nj = report.total_energy_nj;
    std::string blob;
    for (const auto& a : schedule.assignments)
        blob += std::to_string(a.layer_index) + ":" + std::to_string(a.npu_share) +
                "/" + std::to_string(a.cim_share) + ";";
    result.schedule_digest = io::hex_digest(blob);

    std::lock_guard<std::mutex> lock(mutex_);
    if (!cache_.count(key)) {
        lru_.push_front(key);
        cache_.emplace(key, std::make_pair(result, lru_.begin()));
        if (cache_.size() > capacity_) {
            cache_.erase(lru_.back());
            lru_.pop_back();
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Front utilities
// ---------------------------------------------------------------------------

namespace {

double objective_metric(const FrontPoint& p, Objective objective) {
    return objective == Objective::Latency ? p.latency_s : p.energy_nj;
}

}  // namespace

std::vector<FrontPoint> pareto_front(std::vector<FrontPoint> points,
                                     Objective objective) {
    std::sort(points.begin(), points.end(),
              [&](const FrontPoint& a, const FrontPoint& b) {
                  const double oa = objective_metric(a, objective);
                  const double ob = objective_metric(b, objective);
                  if (oa != ob) return oa < ob;
                  return a.accuracy > b.accuracy;
              });

    std::vector<FrontPoint> front;
    double best_acc = -std::numeric_limits<double>::infinity();
    size_t i = 0;
    while (i < points.size()) {
        size_t j = i;
        const double obj = objective_metric(points[i], objective);
        while (j < points.size() && objective_metric(points[j], objective) == obj) ++j;
        const double group_max = points[i].accuracy;  // sorted acc-descending
        if (group_max > best_acc) {
            for (size_t k = i; k < j; ++k)
                if (points[k].accuracy == group_max) front.push_back(points[k]);
            best_acc = group_max;
        }
        i = j;
    }
    return front;
}

double hypervolume(const std::vector<FrontPoint>& front, Objective objective,
                   double ref_accuracy, double ref_objective) {
    for (const FrontPoint& p : front) {
        if (p.accuracy < ref_accuracy || objective_metric(p, objective) > ref_objective)
            throw BadReference("front point lies outside the reference box");
    }
    std::vector<FrontPoint> nd = pareto_front(front, objective);
    double area = 0.0;
    double prev_acc = ref_accuracy;
    for (const FrontPoint& p : nd) {  // ascending objective and accuracy
        area += (p.accuracy - prev_acc) * (ref_objective - objective_metric(p, objective));
        prev_acc = std::max(prev_acc, p.accuracy);
    }
    return area;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

namespace {

struct Individual {
    SubnetChoice choice;
    std::string key;
    EvalResult eval;
    std::vector<double> objectives;  // all minimized
    int rank = 0;
    double crowding = 0.0;
};

std::vector<double> objectives_of(const EvalResult& r, Objective objective,
                                  bool joint) {
    if (joint) return {-r.accuracy, r.latency_s, r.energy_nj};
    return {-r.accuracy,
            objective == Objective::Latency ? r.latency_s : r.energy_nj};
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

bool feasible(const EvalResult& r, const EvolutionParams& p) {
    switch (p.constraint) {
        case ConstraintKind::None: return true;
        case ConstraintKind::MaxLatency: return r.latency_s <= p.constraint_value;
        case ConstraintKind::MaxEnergy: return r.energy_nj <= p.constraint_value;
    }
    return true;
}

// Fast nondominated sort; fronts returned as index lists in input order.
std::vector<std::vector<size_t>> nondominated_sort(std::vector<Individual>& pop) {
    const size_t n = pop.size();
    std::vector<std::vector<size_t>> dominated(n);
    std::vector<int> dom_count(n, 0);
    std::vector<std::vector<size_t>> fronts(1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(pop[i].objectives, pop[j].objectives))
                dominated[i].push_back(j);
            else if (dominates(pop[j].objectives, pop[i].objectives))
                ++dom_count[i];
        }
        if (dom_count[i] == 0) {
            pop[i].rank = 0;
            fronts[0].push_back(i);
        }
    }
    size_t f = 0;
    while (!fronts[f].empty()) {
        std::vector<size_t> next;
        for (size_t i : fronts[f]) {
            for (size_t j : dominated[i]) {
                if (--dom_count[j] == 0) {
                    pop[j].rank = static_cast<int>(f) + 1;
                    next.push_back(j);
                }
            }
        }
        fronts.push_back(std::move(next));
        ++f;
    }
    fronts.pop_back();
    return fronts;
}

void assign_crowding(std::vector<Individual>& pop, const std::vector<size_t>& front) {
    for (size_t i : front) pop[i].crowding = 0.0;
    if (front.size() < 3) {
        for (size_t i : front)
            pop[i].crowding = std::numeric_limits<double>::infinity();
        return;
    }
    const size_t dims = pop[front[0]].objectives.size();
    std::vector<size_t> order(front);
    for (size_t d = 0; d < dims; ++d) {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (pop[a].objectives[d] != pop[b].objectives[d])
                return pop[a].objectives[d] < pop[b].objectives[d];
            return pop[a].key < pop[b].key;
        });
        const double lo = pop[order.front()].objectives[d];
        const double hi = pop[order.back()].objectives[d];
        pop[order.front()].crowding = std::numeric_limits<double>::infinity();
        pop[order.back()].crowding = std::numeric_limits<double>::infinity();
        if (hi == lo) continue;
        for (size_t k = 1; k + 1 < order.size(); ++k)
            pop[order[k]].crowding +=
                (pop[order[k + 1]].objectives[d] - pop[order[k - 1]].objectives[d]) /
                (hi - lo);
    }
}

// (rank asc, crowding desc, key asc): the deterministic NSGA ordering.
bool nsga_less(const Individual& a, const Individual& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.crowding != b.crowding) return a.crowding > b.crowding;
    return a.key < b.key;
}

void parallel_evaluate(const Evaluator& eval,
                       const std::vector<SubnetChoice>& choices,
                       std::vector<EvalResult>& out, int jobs) {
    out.resize(choices.size());
    const int workers =
        std::max(1, std::min<int>(jobs, static_cast<int>(choices.size())));
    if (workers == 1) {
        for (size_t i = 0; i < choices.size(); ++i) out[i] = eval.evaluate(choices[i]);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (size_t i = t; i < choices.size(); i += workers)
                    out[i] = eval.evaluate(choices[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

ParetoFront front_from_archive(std::vector<Individual> archive, Objective objective) {
    // Dedup by key, then dominance filter.
    std::sort(archive.begin(), archive.end(),
              [](const Individual& a, const Individual& b) { return a.key < b.key; });
    archive.erase(std::unique(archive.begin(), archive.end(),
                              [](const Individual& a, const Individual& b) {
                                  return a.key == b.key;
                              }),
                  archive.end());
    std::vector<bool> keep(archive.size(), true);
    for (size_t i = 0; i < archive.size(); ++i)
        for (size_t j = 0; j < archive.size() && keep[i]; ++j)
            if (i != j && dominates(archive[j].objectives, archive[i].objectives))
                keep[i] = false;

    std::vector<const Individual*> kept;
    for (size_t i = 0; i < archive.size(); ++i)
        if (keep[i]) kept.push_back(&archive[i]);
    std::sort(kept.begin(), kept.end(), [&](const Individual* a, const Individual* b) {
        const double oa = objective == Objective::Latency ? a->eval.latency_s
                                                          : a->eval.energy_nj;
        const double ob = objective == Objective::Latency ? b->eval.latency_s
                                                          : b->eval.energy_nj;
        if (oa != ob) return oa < ob;
        if (a->eval.accuracy != b->eval.accuracy)
            return a->eval.accuracy < b->eval.accuracy;
        return a->key < b->key;
    });

    ParetoFront front;
    front.objective = objective;
    for (const Individual* ind : kept) {
        FrontPoint p;
        p.choice = ind->choice;
        p.accuracy = ind->eval.accuracy;
        p.latency_s = ind->eval.latency_s;
        p.energy_nj = ind->eval.energy_nj;
        p.schedule_digest = ind->eval.schedule_digest;
        front.points.push_back(std::move(p));
    }
    return front;
}

}  // namespace

ParetoFront evolve(const SearchSpace& space, const HardwareConfig& hw,
                   const AccuracySurrogate& surrogate, const EvolutionParams& params,
                   Objective objective, int jobs) {
    if (params.population < 2)
        throw ValidationError("population must be at least 2");
    if (params.mutation_rate < 0 || params.mutation_rate > 1 ||
        params.crossover_rate < 0 || params.crossover_rate > 1)
        throw ValidationError("rates must be in [0, 1]");
    if (params.generations < 0)
        throw ValidationError("generations must be >= 0");
    netir::require_valid_space(space);

    const bool joint = params.joint_three_objective;
    Evaluator eval(space, hw, surrogate, objective);
    std::mt19937_64 rng(params.seed);

    auto make_individual = [&](const SubnetChoice& choice,
                               const EvalResult& r) {
        Individual ind;
        ind.choice = choice;
        ind.key = netir::choice_key(choice, space);
        ind.eval = r;
        ind.objectives = objectives_of(r, objective, joint);
        return ind;
    };

    // Sandwich endpoints first, then random fill.
    std::vector<SubnetChoice> init{netir::smallest_subnet(space),
                                   netir::largest_subnet(space)};
    while (static_cast<int>(init.size()) < params.population)
        init.push_back(netir::sample_random(space, rng));

    std::vector<EvalResult> init_results;
    parallel_evaluate(eval, init, init_results, jobs);
    if (!feasible(init_results[0], params))
        throw EmptyFeasibleSet("constraint excludes even the smallest subnet");

    std::vector<Individual> pop;
    for (size_t i = 0; i < init.size(); ++i)
        if (feasible(init_results[i], params))
            pop.push_back(make_individual(init[i], init_results[i]));

    std::vector<Individual> archive = pop;

    auto prepare_ranks = [&](std::vector<Individual>& p) {
        auto fronts = nondominated_sort(p);
        for (const auto& f : fronts) assign_crowding(p, f);
        return fronts;
    };
    prepare_ranks(pop);

    for (int gen = 0; gen < params.generations; ++gen) {
        auto tournament = [&]() -> const Individual& {
            const size_t a = netir::uniform_below(rng, pop.size());
            const size_t b = netir::uniform_below(rng, pop.size());
            return nsga_less(pop[a], pop[b]) ? pop[a] : pop[b];
        };

        std::vector<SubnetChoice> children;
        children.reserve(params.population);
        for (int i = 0; i < params.population; ++i) {
            const Individual& p1 = tournament();
            const Individual& p2 = tournament();
            SubnetChoice child = next_double(rng) < params.crossover_rate
                                     ? crossover(p1.choice, p2.choice, space, rng)
                                     : p1.choice;
            children.push_back(mutate(child, space, params.mutation_rate, rng));
        }

        std::vector<EvalResult> results;
        parallel_evaluate(eval, children, results, jobs);

        for (size_t i = 0; i < children.size(); ++i) {
            if (!feasible(results[i], params)) continue;
            Individual ind = make_individual(children[i], results[i]);
            pop.push_back(ind);
            archive.push_back(std::move(ind));
        }

        // Environmental selection: nondominated rank, then crowding.
        auto fronts = prepare_ranks(pop);
        std::vector<Individual> next;
        for (const auto& f : fronts) {
            if (next.size() + f.size() <= static_cast<size_t>(params.population)) {
                for (size_t i : f) next.push_back(pop[i]);
            } else {
                std::vector<size_t> rest(f);
                std::sort(rest.begin(), rest.end(), [&](size_t a, size_t b) {
                    return nsga_less(pop[a], pop[b]);
                });
                for (size_t i : rest) {
                    if (next.size() == static_cast<size_t>(params.population)) break;
                    next.push_back(pop[i]);
                }
                break;
            }
        }
        pop = std::move(next);
        prepare_ranks(pop);

        // Keep the archive bounded; dominance filtering dedups it anyway.
        if (archive.size() > 4096) {
            auto front = front_from_archive(std::move(archive), objective);
            archive.clear();
            for (const FrontPoint& p : front.points) {
                EvalResult r{p.accuracy, p.latency_s, p.energy_nj, p.schedule_digest};
                archive.push_back(make_individual(p.choice, r));
            }
        }
    }

    return front_from_archive(std::move(archive), objective);
}

ParetoFront brute_force_front(const SearchSpace& space, const HardwareConfig& hw,
                              const AccuracySurrogate& surrogate, Objective objective,
                              const EvolutionParams& params, uint64_t limit) {
    netir::require_valid_space(space);
    const netir::Cardinality card = netir::space_cardinality(space);
    if (card.saturated || card.as_u64() > limit)
        throw TooLarge("space too large for exhaustive enumeration: " + card.str());

    Evaluator eval(space, hw, surrogate, objective);
    const std::vector<int> counts = netir::dimension_counts(space);
    std::vector<int> idx(counts.size(), 0);
    std::vector<FrontPoint> points;
    while (true) {
        const SubnetChoice choice = netir::choice_from_indices(space, idx);
        const EvalResult r = eval.evaluate(choice);
        if (feasible(r, params)) {
            FrontPoint p;
            p.choice = choice;
            p.accuracy = r.accuracy;
            p.latency_s = r.latency_s;
            p.energy_nj = r.energy_nj;
            p.schedule_digest = r.schedule_digest;
            points.push_back(std::move(p));
        }
        size_t d = 0;
        while (d < idx.size() && ++idx[d] == counts[d]) idx[d++] = 0;
        if (d == idx.size()) break;
    }
    if (points.empty())
        throw EmptyFeasibleSet("constraint excludes every subnet in the space");

    ParetoFront front;
    front.objective = objective;
    front.points = pareto_front(std::move(points), objective);
    return front;
}

std::vector<BlockMixRow> block_mix_report(const ParetoFront& front,
                                          const SearchSpace& space) {
    if (front.points.empty())
        throw ValidationError("block_mix_report needs a nonempty front");
    std::vector<BlockMixRow> rows;
    for (const FrontPoint& p : front.points) {
        const netir::Network net = netir::materialize(space, p.choice);
        BlockMixRow row;
        for (const netir::LayerSpec& l : net.layers) {
            if (l.kind == netir::LayerKind::DepthwiseConv2d) ++row.n_irb_layers;
            if (l.kind == netir::LayerKind::AttentionQKVGen) ++row.n_vit_layers;
        }
        row.ratio = row.n_irb_layers > 0
                        ? static_cast<double>(row.n_vit_layers) / row.n_irb_layers
                        : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hetnas::search

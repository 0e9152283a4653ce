// hetnas: design-space exploration for NPU+CIM edge accelerators.
//
// Verbs: estimate, search, simulate-cim, space, calibrate. Every verb
// writes its outputs plus a run manifest into --output-dir; invalid input
// exits before any file is written. Exit codes: 0 ok, 2 parse error,
// 3 validation error, 4 infeasible.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetnas/cimsim.hpp"
#include "hetnas/costmodel.hpp"
#include "hetnas/errors.hpp"
#include "hetnas/io.hpp"
#include "hetnas/netir.hpp"
#include "hetnas/scheduler.hpp"
#include "hetnas/search.hpp"

namespace {

using namespace hetnas;
using json = nlohmann::ordered_json;

struct RunContext {
    std::string verb;
    std::string output_dir = "hetnas-out";
    uint64_t seed = 0;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    json parameters = json::object();
    json inputs = json::object();                      // path -> digest
    std::map<std::string, std::string> outputs;        // name -> content
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::string read_input(const std::string& path) {
        const std::string bytes = io::read_file(path);
        inputs[path] = io::hex_digest(bytes);
        return bytes;
    }

    void stage(const std::string& name, std::string content) {
        outputs.emplace(name, std::move(content));
    }

    // Everything is computed before anything lands on disk.
    void commit() {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        json manifest;
        manifest["verb"] = verb;
        manifest["tool_version"] = io::kToolVersion;
        manifest["seed"] = seed;
        manifest["jobs"] = jobs;
        manifest["parameters"] = parameters;
        manifest["inputs"] = inputs;
        json names = json::array();
        for (const auto& [name, content] : outputs) names.push_back(name);
        manifest["outputs"] = names;
        manifest["wall_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        for (const auto& [name, content] : outputs)
            io::atomic_write_file(output_dir + "/" + name, content);
        io::atomic_write_file(output_dir + "/manifest.json", manifest.dump(2) + "\n");
    }
};

netir::SearchSpace load_space_arg(RunContext& ctx, const std::string& path) {
    if (path.empty()) {
        ctx.parameters["space"] = "<built-in>";
        return netir::default_space();
    }
    ctx.parameters["space"] = path;
    return io::space_from_json(ctx.read_input(path));
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string space_path, choice_path, network_path, hw_path;
    std::string objective = "latency";
};

int run_estimate(RunContext& ctx, const EstimateArgs& args) {
    const auto objective = scheduler::objective_from_string(args.objective);
    ctx.parameters["objective"] = args.objective;
    ctx.parameters["hw"] = args.hw_path;

    const costmodel::HardwareConfig hw =
        costmodel::load_hw(ctx.read_input(args.hw_path));

    netir::Network net;
    if (!args.network_path.empty()) {
        ctx.parameters["network"] = args.network_path;
        net = io::network_from_json(ctx.read_input(args.network_path));
    } else {
        const netir::SearchSpace space = load_space_arg(ctx, args.space_path);
        ctx.parameters["choice"] = args.choice_path;
        const netir::SubnetChoice choice =
            io::choice_from_json(ctx.read_input(args.choice_path), space);
        const auto violations = netir::validate(space, choice);
        if (!violations.empty())
            throw ValidationError("choice invalid: " + violations.front().block + "/" +
                                  violations.front().field + ": " +
                                  violations.front().message);
        net = netir::materialize(space, choice);
    }

    auto [schedule, report] = scheduler::schedule_network(net, hw, objective);
    const scheduler::CostReport baseline = scheduler::npu_only_report(net, hw);

    ctx.stage("report.json", io::report_to_json(report, baseline, objective));
    ctx.stage("report.csv", io::report_to_csv(net, schedule, report));
    ctx.stage("schedule.json", io::schedule_to_json(schedule));
    ctx.stage("network.json", io::network_to_json(net));
    ctx.commit();

    std::cout << "layers " << net.layers.size() << "\n"
              << "latency_s " << io::format_double(report.total_latency_s) << "\n"
              << "energy_nj " << io::format_double(report.total_energy_nj) << "\n"
              << "npu_only_latency_s "
              << io::format_double(baseline.total_latency_s) << "\n"
              << "speedup_vs_npu_only "
              << io::format_double(baseline.total_latency_s / report.total_latency_s)
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

struct SearchArgs {
    std::string space_path, hw_path;
    std::string objective = "latency";
    std::string surrogate = "synthetic";
    std::string surrogate_csv;
    double constraint = 0.0;
    bool has_constraint = false;
    bool joint = false;
    search::EvolutionParams params;
};

int run_search(RunContext& ctx, const SearchArgs& args) {
    const auto objective = scheduler::objective_from_string(args.objective);
    const netir::SearchSpace space = load_space_arg(ctx, args.space_path);
    const costmodel::HardwareConfig hw =
        costmodel::load_hw(ctx.read_input(args.hw_path));

    search::EvolutionParams params = args.params;
    params.seed = ctx.seed;
    params.joint_three_objective = args.joint;
    if (args.has_constraint) {
        params.constraint = objective == scheduler::Objective::Latency
                                ? search::ConstraintKind::MaxLatency
                                : search::ConstraintKind::MaxEnergy;
        params.constraint_value = args.constraint;
    }

    ctx.parameters["hw"] = args.hw_path;
    ctx.parameters["objective"] = args.objective;
    ctx.parameters["surrogate"] = args.surrogate;
    ctx.parameters["population"] = params.population;
    ctx.parameters["generations"] = params.generations;
    ctx.parameters["mutation_rate"] = params.mutation_rate;
    ctx.parameters["crossover_rate"] = params.crossover_rate;
    ctx.parameters["joint_three_objective"] = params.joint_three_objective;
    if (args.has_constraint) ctx.parameters["constraint"] = args.constraint;

    std::unique_ptr<search::AccuracySurrogate> surrogate;
    if (args.surrogate == "synthetic") {
        surrogate = std::make_unique<search::SyntheticSurrogate>();
    } else if (args.surrogate == "lookup") {
        if (args.surrogate_csv.empty())
            throw ParseError("--surrogate lookup needs --surrogate-csv");
        ctx.parameters["surrogate_csv"] = args.surrogate_csv;
        surrogate = std::make_unique<search::LookupTableSurrogate>(
            search::LookupTableSurrogate::from_csv(ctx.read_input(args.surrogate_csv)));
    } else {
        throw ParseError("unknown surrogate: " + args.surrogate);
    }

    const search::ParetoFront front =
        search::evolve(space, hw, *surrogate, params, objective, ctx.jobs);

    ctx.stage("front.csv", io::front_to_csv(front, space));
    ctx.stage("front.json", io::front_to_json(front, space));
    ctx.stage("block_mix.csv",
              io::block_mix_to_csv(search::block_mix_report(front, space)));
    ctx.commit();

    double best_acc = 0.0;
    for (const auto& p : front.points) best_acc = std::max(best_acc, p.accuracy);
    std::cout << "front_points " << front.points.size() << "\n"
              << "best_accuracy " << io::format_double(best_acc) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// simulate-cim
// ---------------------------------------------------------------------------

struct SimulateArgs {
    int kernel = 3;
    int stride = 1;
    int input = 32;
    int cu = 4;
    std::string layout = "row";
    int sweep_cu = 0;
};

cimsim::DedupConfig make_cfg(const SimulateArgs& args, int cu) {
    cimsim::DedupConfig cfg;
    cfg.kh = cfg.kw = args.kernel;
    cfg.stride = args.stride;
    cfg.input_h = cfg.input_w = args.input;
    cfg.cu_count = cu;
    if (args.layout == "row") {
        cfg.layout = cimsim::GroupLayout::Row;
    } else if (args.layout.rfind("tile:", 0) == 0) {
        cfg.layout = cimsim::GroupLayout::Tile;
        const std::string dims = args.layout.substr(5);
        const size_t x = dims.find('x');
        if (x == std::string::npos)
            throw ParseError("tile layout must look like tile:RxC");
        try {
            cfg.tile_rows = std::stoi(dims.substr(0, x));
            cfg.tile_cols = std::stoi(dims.substr(x + 1));
        } catch (const std::exception&) {
            throw ParseError("tile layout must look like tile:RxC");
        }
        cfg.cu_count = cfg.tile_rows * cfg.tile_cols;
    } else {
        throw ParseError("unknown layout: " + args.layout);
    }
    return cfg;
}

int run_simulate_cim(RunContext& ctx, const SimulateArgs& args) {
    ctx.parameters["kernel"] = args.kernel;
    ctx.parameters["stride"] = args.stride;
    ctx.parameters["input"] = args.input;
    ctx.parameters["cu"] = args.cu;
    ctx.parameters["layout"] = args.layout;

    const cimsim::DedupConfig cfg = make_cfg(args, args.cu);
    const uint64_t naive = cimsim::naive_reads(cfg);
    const uint64_t unique = cimsim::unique_reads(cfg);
    const double reduction = cimsim::reduction_ratio(cfg);
    const double closed_form = cimsim::row_reduction_closed_form(cfg.cu_count);

    json doc;
    doc["kernel"] = args.kernel;
    doc["stride"] = args.stride;
    doc["input"] = args.input;
    doc["cu_count"] = cfg.cu_count;
    doc["layout"] = args.layout;
    doc["naive_reads"] = naive;
    doc["unique_reads"] = unique;
    doc["reduction"] = reduction;
    doc["row_closed_form_full_group"] = closed_form;
    ctx.stage("simulate_cim.json", doc.dump(2) + "\n");

    if (args.sweep_cu > 0) {
        ctx.parameters["sweep_cu"] = args.sweep_cu;
        std::string csv = "cu,naive_reads,unique_reads,reduction\n";
        for (int cu = 1; cu <= args.sweep_cu; ++cu) {
            const cimsim::DedupConfig c = make_cfg(args, cu);
            csv += std::to_string(cu) + "," + std::to_string(cimsim::naive_reads(c)) +
                   "," + std::to_string(cimsim::unique_reads(c)) + "," +
                   io::format_double(cimsim::reduction_ratio(c)) + "\n";
        }
        ctx.stage("simulate_cim_sweep.csv", csv);
    }
    ctx.commit();

    std::cout << "naive_reads " << naive << "\n"
              << "unique_reads " << unique << "\n"
              << "reduction " << io::format_double(reduction) << "\n"
              << "row_closed_form_full_group " << io::format_double(closed_form)
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// space
// ---------------------------------------------------------------------------

struct SpaceArgs {
    std::string space_path;
    bool cardinality = false;
    std::string emit;  // smallest | largest | random
};

int run_space(RunContext& ctx, const SpaceArgs& args) {
    if (!args.cardinality && args.emit.empty())
        throw ParseError("space verb needs --cardinality and/or --emit");
    const netir::SearchSpace space = load_space_arg(ctx, args.space_path);

    if (args.cardinality) {
        ctx.parameters["cardinality"] = true;
        const netir::Cardinality card = netir::space_cardinality(space);
        ctx.stage("cardinality.txt", card.str() + "\n");
        std::cout << "cardinality " << card.str() << "\n";
    }
    if (!args.emit.empty()) {
        ctx.parameters["emit"] = args.emit;
        netir::SubnetChoice choice;
        if (args.emit == "smallest")
            choice = netir::smallest_subnet(space);
        else if (args.emit == "largest")
            choice = netir::largest_subnet(space);
        else if (args.emit == "random")
            choice = netir::sample_random(space, ctx.seed);
        else
            throw ParseError("--emit must be smallest, largest or random");
        ctx.stage("subnet.json", io::choice_to_json(choice, space));
        std::cout << "subnet " << netir::choice_key(choice, space) << "\n";
    }
    ctx.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateArgs {
    std::string samples_path;
    double threshold = 0.1;
};

int run_calibrate(RunContext& ctx, const CalibrateArgs& args) {
    ctx.parameters["samples"] = args.samples_path;
    ctx.parameters["flag_threshold"] = args.threshold;
    const auto samples = io::calibration_from_csv(ctx.read_input(args.samples_path));
    const costmodel::FitReport fit = costmodel::fit_curve(samples, args.threshold);

    json doc;
    doc["peak"] = fit.curve.peak;
    doc["half_point"] = fit.curve.half_point;
    doc["floor"] = fit.curve.floor;
    doc["max_rel_residual"] = fit.max_rel_residual;
    doc["mean_rel_residual"] = fit.mean_rel_residual;
    doc["flag_threshold"] = fit.flag_threshold;
    doc["flagged"] = fit.flagged;
    ctx.stage("curve.json", doc.dump(2) + "\n");
    ctx.commit();

    std::cout << "peak " << io::format_double(fit.curve.peak) << "\n"
              << "half_point " << io::format_double(fit.curve.half_point) << "\n"
              << "max_rel_residual " << io::format_double(fit.max_rel_residual)
              << "\n";
    if (fit.flagged)
        std::cout << "warning: residual above threshold; samples do not follow a "
                     "saturating curve\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design-space exploration for NPU+CIM heterogeneous edge systems"};
    app.require_subcommand(1);
    app.fallthrough();

    RunContext ctx;
    app.add_option("--seed", ctx.seed, "Seed for every random draw");
    app.add_option("--jobs", ctx.jobs, "Worker threads for candidate evaluation");
    app.add_option("--output-dir", ctx.output_dir, "Directory for outputs");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Cost a network or subnet");
    estimate->add_option("--hw", est.hw_path, "Hardware profile JSON")->required();
    estimate->add_option("--space", est.space_path, "Search space JSON");
    estimate->add_option("--choice", est.choice_path, "Subnet choice JSON");
    estimate->add_option("--network", est.network_path, "Layer-level network JSON");
    estimate->add_option("--objective", est.objective, "latency or energy");

    SearchArgs sea;
    auto* search_cmd = app.add_subcommand("search", "Evolutionary subnet search");
    search_cmd->add_option("--hw", sea.hw_path, "Hardware profile JSON")->required();
    search_cmd->add_option("--space", sea.space_path, "Search space JSON");
    search_cmd->add_option("--objective", sea.objective, "latency or energy");
    search_cmd->add_option("--constraint", sea.constraint,
                           "Max objective value (s or nJ)");
    search_cmd->add_option("--population", sea.params.population, "Population size");
    search_cmd->add_option("--generations", sea.params.generations, "Generations");
    search_cmd->add_option("--mutation-rate", sea.params.mutation_rate,
                           "Per-field mutation probability");
    search_cmd->add_option("--crossover-rate", sea.params.crossover_rate,
                           "Crossover probability");
    search_cmd->add_option("--surrogate", sea.surrogate, "synthetic or lookup");
    search_cmd->add_option("--surrogate-csv", sea.surrogate_csv,
                           "choice_key,accuracy table for --surrogate lookup");
    search_cmd->add_flag("--joint", sea.joint, "Optimize latency and energy jointly");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate-cim", "Input-read dedup counts");
    simulate->add_option("--kernel", sim.kernel, "Square kernel size");
    simulate->add_option("--stride", sim.stride, "Stride");
    simulate->add_option("--input", sim.input, "Square input size");
    simulate->add_option("--cu", sim.cu, "Compute units per macro");
    simulate->add_option("--layout", sim.layout, "row or tile:RxC");
    simulate->add_option("--sweep-cu", sim.sweep_cu, "Also emit a CSV sweep to N CUs");

    SpaceArgs spc;
    auto* space_cmd = app.add_subcommand("space", "Inspect a search space");
    space_cmd->add_option("--space", spc.space_path, "Search space JSON");
    space_cmd->add_flag("--cardinality", spc.cardinality, "Print the space size");
    space_cmd->add_option("--emit", spc.emit, "smallest, largest or random");

    CalibrateArgs cal;
    auto* calibrate = app.add_subcommand("calibrate", "Fit a saturating curve");
    calibrate->add_option("--samples", cal.samples_path, "workload,rate CSV")
        ->required();
    calibrate->add_option("--threshold", cal.threshold, "Residual flag threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (estimate->parsed()) {
            ctx.verb = "estimate";
            if (est.network_path.empty() && est.choice_path.empty())
                throw ParseError("estimate needs --network or --choice");
            return run_estimate(ctx, est);
        }
        if (search_cmd->parsed()) {
            ctx.verb = "search";
            sea.has_constraint = search_cmd->count("--constraint") > 0;
            return run_search(ctx, sea);
        }
        if (simulate->parsed()) {
            ctx.verb = "simulate-cim";
            return run_simulate_cim(ctx, sim);
        }
        if (space_cmd->parsed()) {
            ctx.verb = "space";
            return run_space(ctx, spc);
        }
        if (calibrate->parsed()) {
            ctx.verb = "calibrate";
            return run_calibrate(ctx, cal);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

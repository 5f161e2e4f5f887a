// Command-line front end: solve / eval / gen / convert-gsrc / plot / bench.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 internal failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amsplace/bench.hpp"
#include "amsplace/io.hpp"
#include "amsplace/model.hpp"
#include "amsplace/refine.hpp"
#include "amsplace/search.hpp"
#include "amsplace/syngen.hpp"

namespace {

using namespace amsplace;

struct SolveArgs {
    std::string instance_path;
    std::string algo = "ga";
    double time_limit = -1.0;
    std::uint64_t seed = 1;
    double c_area = 0, c_conn = 0, c_prox = 0, c_inter = 0;
    int pop_size = 300;
    int generations = 100;
    int segments = 0;
    int iterations = 0;
    bool no_refine = false;
    bool modulation = false;
    int threads = 1;
    std::string out_path;
};

struct GenArgs {
    int n = 50;
    std::string nets = "25:50";
    bool symmetry = false;
    bool negative_distances = false;
    int blockages = 0;
    double mvf = 0.5;
    int compose = 0;
    std::uint64_t seed = 1;
    std::string out_path;
};

struct GsrcArgs {
    std::string blocks_path, nets_path, pl_path, out_path;
    bool include_terminals = false;
};

struct PlotArgs {
    std::string instance_path, placement_path, out_path;
};

struct BenchArgs {
    std::string dir;
    std::string algos = "ga,cmaes";
    double time_limit = 10.0;
    int repeats = 3;
    std::uint64_t seed = 1;
    bool no_refine = false;
    int threads = 1;
    std::string out_path;
};

struct EvalArgs {
    std::string instance_path, placement_path;
};

int cmd_solve(const SolveArgs& a, const CLI::App& sub) {
    Instance inst = parse_instance(read_file(a.instance_path));
    if (sub.count("--c-area")) inst.weights.c_area = a.c_area;
    if (sub.count("--c-conn")) inst.weights.c_conn = a.c_conn;
    if (sub.count("--c-prox")) inst.weights.c_prox = a.c_prox;
    if (sub.count("--c-inter")) inst.weights.c_inter = a.c_inter;

    auto t0 = std::chrono::steady_clock::now();
    SearchResult sr;
    if (a.algo == "ga") {
        GAConfig cfg;
        cfg.pop_size = a.pop_size;
        cfg.max_generations = a.generations;
        cfg.max_segments = a.segments;
        cfg.time_limit_seconds = a.time_limit;
        cfg.modulation_gene = a.modulation;
        cfg.rng_seed = a.seed;
        cfg.threads = a.threads;
        sr = run_ga(inst, cfg);
    } else {
        CMAConfig cfg;
        cfg.max_iterations = a.iterations;
        cfg.time_limit_seconds = a.time_limit;
        cfg.modulation_gene = a.modulation;
        cfg.rng_seed = a.seed;
        cfg.threads = a.threads;
        sr = run_cmaes(inst, cfg);
    }

    Placement placement = sr.placement;
    CriterionReport report = sr.report;
    if (!a.no_refine) {
        RefineResult rr = refine_pipeline(sr.genes, inst, inst.weights);
        placement = std::move(rr.placement);
        report = rr.report;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();

    SolveMeta meta{a.algo, a.seed, wall};
    write_file(a.out_path, write_placement(placement, inst, report, &meta));
    bool feasible = check_feasible(placement, inst).ok;
    std::printf("total=%.6f feasible=%d evaluations=%llu wall=%.2fs out=%s\n",
                report.total, feasible ? 1 : 0,
                static_cast<unsigned long long>(sr.evaluations), wall,
                a.out_path.c_str());
    return 0;
}

int cmd_eval(const EvalArgs& a) {
    Instance inst = parse_instance(read_file(a.instance_path));
    Placement p = parse_placement(read_file(a.placement_path), inst);
    CriterionReport r = criterion(p, inst, inst.weights);
    nlohmann::ordered_json doc;
    doc["area_term"] = r.area_term;
    doc["conn_raw"] = r.conn_raw;
    doc["prox_raw"] = r.prox_raw;
    doc["inter_raw"] = r.inter_raw;
    doc["s_conn"] = r.s_conn;
    doc["s_prox"] = r.s_prox;
    doc["s_inter"] = r.s_inter;
    doc["penalty_applied"] = r.penalty_applied;
    doc["total"] = r.total;
    FeasibilityResult f = check_feasible(p, inst);
    doc["feasible"] = f.ok;
    if (!f.ok) doc["violation"] = f.detail;
    std::printf("%s\n", doc.dump(2).c_str());
    return 0;
}

int cmd_gen(const GenArgs& a) {
    GenParams p;
    p.n_rects = a.n;
    if (std::sscanf(a.nets.c_str(), "%d:%d", &p.n_nets_lo, &p.n_nets_hi) != 2 ||
        p.n_nets_lo < 0 || p.n_nets_lo > p.n_nets_hi) {
        std::cerr << "error: --nets expects LO:HI with 0 <= LO <= HI\n";
        return 2;
    }
    p.with_symmetry = a.symmetry;
    p.allow_negative_distances = a.negative_distances;
    p.n_blockages = a.blockages;
    p.multi_variant_fraction = a.mvf;
    p.rng_seed = a.seed;
    Instance inst = generate(p);
    if (a.compose > 0) inst = compose_copies(inst, a.compose);
    write_file(a.out_path, write_instance(inst));
    std::printf("n=%d nets=%zu groups=%zu blockages=%zu out=%s\n", inst.n(),
                inst.nets.size(), inst.groups.size(), inst.blockages.size(),
                a.out_path.c_str());
    return 0;
}

int cmd_convert_gsrc(const GsrcArgs& a) {
    std::string pl = a.pl_path.empty() ? std::string() : read_file(a.pl_path);
    Instance inst = parse_gsrc(read_file(a.blocks_path), read_file(a.nets_path), pl,
                               a.include_terminals);
    write_file(a.out_path, write_instance(inst));
    std::printf("n=%d nets=%zu out=%s\n", inst.n(), inst.nets.size(),
                a.out_path.c_str());
    return 0;
}

int cmd_plot(const PlotArgs& a) {
    Instance inst = parse_instance(read_file(a.instance_path));
    Placement p = parse_placement(read_file(a.placement_path), inst);
    write_file(a.out_path, render_svg(p, inst));
    std::printf("out=%s\n", a.out_path.c_str());
    return 0;
}

int cmd_bench(const BenchArgs& a) {
    BenchConfig cfg;
    for (size_t pos = 0; pos < a.algos.size();) {
        size_t comma = a.algos.find(',', pos);
        if (comma == std::string::npos) comma = a.algos.size();
        std::string m = a.algos.substr(pos, comma - pos);
        if (m != "ga" && m != "cmaes") {
            std::cerr << "error: --algo entries must be 'ga' or 'cmaes', got '" << m
                      << "'\n";
            return 2;
        }
        cfg.methods.push_back(std::move(m));
        pos = comma + 1;
    }
    cfg.time_limit_seconds = a.time_limit;
    cfg.repeats = a.repeats;
    cfg.seed = a.seed;
    cfg.refine = !a.no_refine;
    cfg.threads = a.threads;

    std::vector<std::pair<std::string, Instance>> instances;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(a.dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        instances.emplace_back(f.stem().string(), parse_instance(read_file(f.string())));
    if (instances.empty()) {
        std::cerr << "error: no .json instances in " << a.dir << "\n";
        return 3;
    }

    std::vector<BenchRun> rows = run_bench(instances, cfg);
    write_file(a.out_path, bench_csv(rows));
    for (const MethodSummary& s : aggregate(rows))
        std::printf("%s: aRD=%.3f%% best_hits=%d\n", s.method.c_str(), s.ard_percent,
                    s.best_hits);
    std::printf("out=%s\n", a.out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"amsplace - analog placement engine"};
    app.require_subcommand(1);

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "Optimize a placement");
    solve->add_option("--instance", sa.instance_path, "instance JSON")->required();
    solve->add_option("--algo", sa.algo, "search algorithm")
        ->check(CLI::IsMember({"ga", "cmaes"}));
    solve->add_option("--time-limit", sa.time_limit,
                      "wall-clock budget in seconds (<0: none)");
    solve->add_option("--seed", sa.seed, "rng seed");
    solve->add_option("--c-area", sa.c_area, "override area weight");
    solve->add_option("--c-conn", sa.c_conn, "override connectivity weight");
    solve->add_option("--c-prox", sa.c_prox, "override proximity weight");
    solve->add_option("--c-inter", sa.c_inter, "override interface weight");
    solve->add_option("--pop-size", sa.pop_size, "GA population size");
    solve->add_option("--generations", sa.generations, "GA generations per segment");
    solve->add_option("--segments", sa.segments, "GA segment cap (0: by time limit)");
    solve->add_option("--iterations", sa.iterations,
                      "CMA-ES iteration cap (0: by time limit)");
    solve->add_flag("--modulation", sa.modulation, "enable the priority-modulation gene");
    solve->add_flag("--no-refine", sa.no_refine, "skip local search and compaction");
    solve->add_option("--threads", sa.threads, "evaluation workers");
    solve->add_option("--out", sa.out_path, "placement JSON output")->required();

    EvalArgs ea;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a placement");
    eval->add_option("--instance", ea.instance_path, "instance JSON")->required();
    eval->add_option("--placement", ea.placement_path, "placement JSON")->required();

    GenArgs ga;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance");
    gen->add_option("--n", ga.n, "number of rectangles")->required();
    gen->add_option("--nets", ga.nets, "net count range LO:HI");
    gen->add_flag("--symmetry", ga.symmetry, "add symmetry groups");
    gen->add_flag("--negative-distances", ga.negative_distances,
                  "allow pocket-merging distances");
    gen->add_option("--blockages", ga.blockages, "number of blockages")
        ->check(CLI::Range(0, 2));
    gen->add_option("--mvf", ga.mvf, "multi-variant fraction")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--compose", ga.compose, "compose K disjoint copies (K >= 2)")
        ->check(CLI::Range(2, 1000));
    gen->add_option("--seed", ga.seed, "rng seed");
    gen->add_option("--out", ga.out_path, "instance JSON output")->required();

    GsrcArgs ca;
    CLI::App* conv = app.add_subcommand("convert-gsrc", "Convert GSRC blocks/nets");
    conv->add_option("--blocks", ca.blocks_path, ".blocks file")->required();
    conv->add_option("--nets", ca.nets_path, ".nets file")->required();
    conv->add_option("--pl", ca.pl_path, ".pl file (terminal positions)");
    conv->add_flag("--include-terminals", ca.include_terminals,
                   "keep terminals as fixed net anchors");
    conv->add_option("--out", ca.out_path, "instance JSON output")->required();

    PlotArgs pa;
    CLI::App* plot = app.add_subcommand("plot", "Render a placement as SVG");
    plot->add_option("--instance", pa.instance_path, "instance JSON")->required();
    plot->add_option("--placement", pa.placement_path, "placement JSON")->required();
    plot->add_option("--out", pa.out_path, "SVG output")->required();

    BenchArgs ba;
    CLI::App* bench = app.add_subcommand("bench", "Benchmark a directory of instances");
    bench->add_option("--dir", ba.dir, "directory of instance JSON files")->required();
    bench->add_option("--algo", ba.algos, "comma-separated methods");
    bench->add_option("--time-limit", ba.time_limit, "seconds per run");
    bench->add_option("--repeats", ba.repeats, "repeats per (method, instance)")
        ->check(CLI::Range(1, 1000));
    bench->add_option("--seed", ba.seed, "base rng seed");
    bench->add_flag("--no-refine", ba.no_refine, "skip local search and compaction");
    bench->add_option("--threads", ba.threads, "evaluation workers");
    bench->add_option("--out", ba.out_path, "CSV report output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(sa, *solve);
        if (eval->parsed()) return cmd_eval(ea);
        if (gen->parsed()) return cmd_gen(ga);
        if (conv->parsed()) return cmd_convert_gsrc(ca);
        if (plot->parsed()) return cmd_plot(pa);
        if (bench->parsed()) return cmd_bench(ba);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

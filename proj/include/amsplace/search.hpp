#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "amsplace/decoder.hpp"
#include "amsplace/evaluator.hpp"
#include "amsplace/model.hpp"

namespace amsplace {

// Genetic-algorithm settings. The ratio/probability defaults follow the tuned
// values used throughout: tournament 0.02, elite 0.05, P_C 0.8, P_M 0.1,
// seed ratio 0.2.
//
// Termination: the run executes "segments" of max_generations generations;
// when a segment ends with wall-clock budget left, the population is
// reinitialized (fresh seeded population, continuing rng) and search resumes.
//   time_limit_seconds > 0  — stop when the budget is exhausted.
//   time_limit_seconds == 0 — degenerate run: evaluate the initial population
//                             and return its best.
//   time_limit_seconds < 0  — no wall-clock limit; max_segments alone governs
//                             (0 is then treated as 1). This is the fully
//                             deterministic mode used by tests and --generations.
// max_segments == 0 means "no segment cap" (until the time limit).
struct GAConfig {
    int pop_size = 300;
    double tournament_ratio = 0.02;  // T = ceil(pop_size * tournament_ratio)
    double elite_ratio = 0.05;       // elites = ceil(pop_size * elite_ratio)
    double p_crossover = 0.8;
    double p_mutation = 0.1;         // chance to mutate a crossover child
    double gene_mutation_rate = 0.1; // per-gene reset chance inside mutate()
    double seed_ratio = 0.2;
    int max_generations = 100;       // generations per segment
    int max_segments = 0;
    double time_limit_seconds = 0.0;
    bool modulation_gene = false;    // append the priority-modulation gene
    std::uint64_t rng_seed = 1;
    int threads = 1;                 // fitness evaluation workers
};

// CMA-ES settings. The search warm-starts its mean from the best individual
// of a short GA run (warmstart_generations with a 300-individual population);
// 0 disables the warm start and centres the mean at 0.5.
// time_limit semantics match GAConfig; max_iterations == 0 means "until the
// time limit" (and is treated as 100 when there is no wall-clock limit).
struct CMAConfig {
    double sigma0 = 0.25;
    int warmstart_generations = 10;
    int max_iterations = 0;
    double time_limit_seconds = 0.0;
    bool modulation_gene = false;
    std::uint64_t rng_seed = 1;
    int threads = 1;
};

struct HistoryEntry {
    int segment = 0;     // restart segment (GA) — always 0 for CMA-ES
    int generation = 0;  // generation within the segment / CMA iteration
    double best = 0.0;   // best criterion seen (per generation for GA,
                         // best-so-far for CMA-ES)
};

struct SearchResult {
    Chromosome genes;
    Placement placement;
    CriterionReport report;
    std::vector<HistoryEntry> history;
    std::uint64_t evaluations = 0;  // number of decodes performed
};

// Random population with the first floor(seed_ratio * pop_size) individuals
// nudged: the variant gene targets the most square-like variant and the
// position gene is scaled by k_i/n, where k_i is the rect's 1-based rank by
// descending seeded-variant area (largest first).
std::vector<Chromosome> seed_population(const Instance& inst, int pop_size,
                                        double seed_ratio, bool modulation_gene,
                                        std::mt19937_64& rng);

// Cut points 0 <= a <= b <= L uniform; child = p1[0,a) + p2[a,b) + p1[b,L).
Chromosome two_point_crossover(const Chromosome& p1, const Chromosome& p2,
                               std::mt19937_64& rng);

// Each gene is reset to a fresh uniform [0,1] draw with probability `rate`.
Chromosome mutate(const Chromosome& c, double rate, std::mt19937_64& rng);

SearchResult run_ga(const Instance& inst, const GAConfig& cfg);

SearchResult run_cmaes(const Instance& inst, const CMAConfig& cfg);

}  // namespace amsplace

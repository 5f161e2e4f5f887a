#include "amsplace/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "amsplace/detail/format.hpp"

namespace amsplace {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent, reproducible stream per (segment, generation, child): results
// do not depend on evaluation order or thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    return splitmix64(splitmix64(splitmix64(master ^ a) ^ b) ^ c);
}

double unit_draw(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

class Deadline {
 public:
    explicit Deadline(double seconds)
        : unlimited_(seconds < 0.0),
          end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(std::max(0.0, seconds)))) {}
    bool expired() const {
        return !unlimited_ && std::chrono::steady_clock::now() >= end_;
    }

 private:
    bool unlimited_;
    std::chrono::steady_clock::time_point end_;
};

template <typename F>
void parallel_for(int threads, int count, F&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int nw = std::min(threads, count);
    pool.reserve(nw - 1);
    for (int t = 1; t < nw; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

int tournament_pick(const std::vector<double>& fit, int size, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(0, static_cast<int>(fit.size()) - 1);
    int best = dist(rng);
    for (int t = 1; t < size; ++t) {
        int c = dist(rng);
        if (fit[c] < fit[best]) best = c;
    }
    return best;
}

void check_ratios(const GAConfig& cfg) {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (cfg.pop_size <= 0 || cfg.max_generations <= 0 || cfg.max_segments < 0 ||
        !in01(cfg.tournament_ratio) || !in01(cfg.elite_ratio) ||
        !in01(cfg.p_crossover) || !in01(cfg.p_mutation) ||
        !in01(cfg.gene_mutation_rate) || !in01(cfg.seed_ratio))
        throw std::invalid_argument("run_ga: invalid configuration");
}

}  // namespace

std::vector<Chromosome> seed_population(const Instance& inst, int pop_size,
                                        double seed_ratio, bool modulation_gene,
                                        std::mt19937_64& rng) {
    const int n = inst.n();
    const size_t L = static_cast<size_t>(3 * n) + (modulation_gene ? 1 : 0);

    std::vector<Chromosome> pop(pop_size);
    for (Chromosome& c : pop) {
        c.resize(L);
        for (double& g : c) g = unit_draw(rng);
    }

    const int seeded = static_cast<int>(std::floor(seed_ratio * pop_size));
    if (seeded == 0 || n == 0) return pop;

    // Most square-like variant per rect, then rects ranked by descending area
    // of that variant (largest area placed earliest).
    std::vector<int> square_v(n, 0);
    std::vector<std::int64_t> area(n, 0);
    for (int i = 0; i < n; ++i) {
        const auto& vars = inst.rects[i].variants;
        double best_ratio = -1.0;
        for (int v = 0; v < static_cast<int>(vars.size()); ++v) {
            double r = static_cast<double>(std::min(vars[v].w, vars[v].h)) /
                       static_cast<double>(std::max(vars[v].w, vars[v].h));
            if (r > best_ratio) {
                best_ratio = r;
                square_v[i] = v;
            }
        }
        area[i] = static_cast<std::int64_t>(vars[square_v[i]].w) * vars[square_v[i]].h;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return area[a] > area[b]; });
    std::vector<int> rank(n, 0);
    for (int k = 0; k < n; ++k) rank[order[k]] = k + 1;

    for (int s = 0; s < seeded; ++s) {
        for (int i = 0; i < n; ++i) {
            const int m = static_cast<int>(inst.rects[i].variants.size());
            pop[s][n + i] = (square_v[i] + 0.5) / m;
            pop[s][i] *= static_cast<double>(rank[i]) / n;
        }
    }
    return pop;
}

Chromosome two_point_crossover(const Chromosome& p1, const Chromosome& p2,
                               std::mt19937_64& rng) {
    if (p1.size() != p2.size())
        throw std::invalid_argument("two_point_crossover: length mismatch");
    const int L = static_cast<int>(p1.size());
    std::uniform_int_distribution<int> dist(0, L);
    int a = dist(rng), b = dist(rng);
    if (a > b) std::swap(a, b);
    Chromosome child = p1;
    std::copy(p2.begin() + a, p2.begin() + b, child.begin() + a);
    return child;
}

Chromosome mutate(const Chromosome& c, double rate, std::mt19937_64& rng) {
    Chromosome out = c;
    for (double& g : out)
        if (unit_draw(rng) < rate) g = unit_draw(rng);
    return out;
}

SearchResult run_ga(const Instance& inst, const GAConfig& cfg) {
    check_ratios(cfg);
    const DecodePlan plan(inst);
    const Deadline deadline(cfg.time_limit_seconds);
    const bool no_clock = cfg.time_limit_seconds < 0.0;
    const bool initial_only = cfg.time_limit_seconds == 0.0;
    int max_segments = cfg.max_segments;
    if (no_clock && max_segments == 0) max_segments = 1;

    const int pop_size = cfg.pop_size;
    const int T = std::max(1, static_cast<int>(std::ceil(pop_size * cfg.tournament_ratio)));
    const int n_elite =
        std::min(pop_size, static_cast<int>(std::ceil(pop_size * cfg.elite_ratio)));

    SearchResult res;
    double best_total = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const std::vector<Chromosome>& group, std::vector<double>& fit) {
        fit.assign(group.size(), 0.0);
        parallel_for(cfg.threads, static_cast<int>(group.size()), [&](int i) {
            fit[i] = decode_with_plan(group[i], plan, inst.weights).report.total;
        });
        res.evaluations += group.size();
    };
    auto note_best = [&](const std::vector<Chromosome>& group,
                         const std::vector<double>& fit) {
        for (size_t i = 0; i < group.size(); ++i)
            if (fit[i] < best_total) {
                best_total = fit[i];
                res.genes = group[i];
            }
    };

    std::vector<Chromosome> pop, children;
    std::vector<double> fit, child_fit;

    bool out_of_time = false;
    for (int segment = 0; !out_of_time; ++segment) {
        if (max_segments > 0 && segment >= max_segments) break;
        if (segment > 0 && deadline.expired()) break;

        std::mt19937_64 seg_rng(derive_seed(cfg.rng_seed, segment, 0, 0));
        pop = seed_population(inst, pop_size, cfg.seed_ratio, cfg.modulation_gene,
                              seg_rng);
        evaluate(pop, fit);
        note_best(pop, fit);
        res.history.push_back({segment, 0, *std::min_element(fit.begin(), fit.end())});
        if (initial_only) break;

        for (int gen = 1; gen <= cfg.max_generations; ++gen) {
            if (deadline.expired()) {
                out_of_time = true;
                break;
            }

            std::vector<int> idx(pop_size);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int b) { return fit[a] < fit[b]; });

            children.assign(pop_size, {});
            for (int k = 0; k < pop_size; ++k) {
                std::mt19937_64 rng(
                    derive_seed(cfg.rng_seed, segment, gen, static_cast<std::uint64_t>(k) + 1));
                int p1 = tournament_pick(fit, T, rng);
                int p2 = tournament_pick(fit, T, rng);
                if (unit_draw(rng) < cfg.p_crossover) {
                    Chromosome child = two_point_crossover(pop[p1], pop[p2], rng);
                    if (unit_draw(rng) < cfg.p_mutation)
                        child = mutate(child, cfg.gene_mutation_rate, rng);
                    children[k] = std::move(child);
                } else {
                    children[k] = mutate(pop[p1], cfg.gene_mutation_rate, rng);
                }
            }
            evaluate(children, child_fit);
            note_best(children, child_fit);

            // Survivors: best pop_size of children plus current elites.
            for (int e = 0; e < n_elite; ++e) {
                children.push_back(pop[idx[e]]);
                child_fit.push_back(fit[idx[e]]);
            }
            std::vector<int> pool(children.size());
            std::iota(pool.begin(), pool.end(), 0);
            std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
                return child_fit[a] < child_fit[b];
            });
            std::vector<Chromosome> next_pop(pop_size);
            std::vector<double> next_fit(pop_size);
            for (int k = 0; k < pop_size; ++k) {
                next_pop[k] = std::move(children[pool[k]]);
                next_fit[k] = child_fit[pool[k]];
            }
            pop = std::move(next_pop);
            fit = std::move(next_fit);
            res.history.push_back({segment, gen, fit[0]});  // pool sorted ascending
        }
    }

    DecodeResult dr = decode_with_plan(res.genes, plan, inst.weights);
    res.placement = std::move(dr.placement);
    res.report = dr.report;
    return res;
}

}  // namespace amsplace

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "amsplace/search.hpp"

namespace amsplace {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
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

}  // namespace

SearchResult run_cmaes(const Instance& inst, const CMAConfig& cfg) {
    if (cfg.sigma0 < 0.0 || cfg.warmstart_generations < 0 || cfg.max_iterations < 0)
        throw std::invalid_argument("run_cmaes: invalid configuration");

    const DecodePlan plan(inst);
    const Deadline deadline(cfg.time_limit_seconds);
    const int L = chromosome_length(inst, cfg.modulation_gene);

    SearchResult res;
    double best_total = std::numeric_limits<double>::infinity();

    Eigen::VectorXd mean(L);
    if (L == 0) {
        res.genes.clear();
        DecodeResult dr = decode_with_plan(res.genes, plan, inst.weights);
        res.placement = std::move(dr.placement);
        res.report = dr.report;
        return res;
    }

    if (cfg.warmstart_generations > 0) {
        GAConfig ga;
        ga.max_generations = cfg.warmstart_generations;
        ga.max_segments = 1;
        ga.time_limit_seconds = cfg.time_limit_seconds;
        ga.modulation_gene = cfg.modulation_gene;
        ga.rng_seed = mix64(cfg.rng_seed ^ 0xA5A5A5A5A5A5A5A5ull);
        ga.threads = cfg.threads;
        SearchResult warm = run_ga(inst, ga);
        res.evaluations += warm.evaluations;
        best_total = warm.report.total;
        res.genes = warm.genes;
        for (int i = 0; i < L; ++i) mean[i] = warm.genes[i];
    } else {
        mean.setConstant(0.5);
        res.genes.assign(L, 0.5);
        best_total =
            decode_with_plan(res.genes, plan, inst.weights).report.total;
        ++res.evaluations;
    }
    res.history.push_back({0, 0, best_total});

    // Standard strategy parameters for the given dimension.
    const int lambda = 4 + static_cast<int>(std::floor(3.0 * std::log(L)));
    const int mu = lambda / 2;
    Eigen::VectorXd w(mu);
    for (int i = 0; i < mu; ++i) w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
    w /= w.sum();
    const double mu_eff = 1.0 / w.squaredNorm();
    const double nd = L;
    const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
    const double d_sigma =
        1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) +
        c_sigma;
    const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
    const double c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
    const double cmu =
        std::min(1.0 - c1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                               ((nd + 2.0) * (nd + 2.0) + mu_eff));
    const double chiN =
        std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
    const int eigen_every =
        std::max(1, static_cast<int>(std::floor(1.0 / ((c1 + cmu) * nd * 10.0))));

    Eigen::VectorXd ps = Eigen::VectorXd::Zero(L);
    Eigen::VectorXd pc = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(L, L);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(L, L);
    Eigen::VectorXd D = Eigen::VectorXd::Ones(L);
    Eigen::MatrixXd invsqrtC = Eigen::MatrixXd::Identity(L, L);
    double sigma = cfg.sigma0;

    std::mt19937_64 rng(mix64(cfg.rng_seed ^ 0x0F0F0F0F0F0F0F0Full));
    std::normal_distribution<double> gauss(0.0, 1.0);

    int max_iters = cfg.max_iterations;
    if (max_iters == 0 && cfg.time_limit_seconds < 0.0) max_iters = 100;

    Eigen::MatrixXd X(L, lambda);
    std::vector<double> fit(lambda);
    std::vector<Chromosome> genes(lambda, Chromosome(L));

    for (int iter = 1; max_iters == 0 || iter <= max_iters; ++iter) {
        if (deadline.expired() || sigma <= 1e-300) break;

        for (int k = 0; k < lambda; ++k) {
            Eigen::VectorXd z(L);
            for (int i = 0; i < L; ++i) z[i] = gauss(rng);
            Eigen::VectorXd x = mean + sigma * (B * (D.asDiagonal() * z));
            // Repair out-of-box samples; the clipped vector is what gets both
            // evaluated and used in the distribution update.
            for (int i = 0; i < L; ++i) x[i] = std::clamp(x[i], 0.0, 1.0);
            X.col(k) = x;
            for (int i = 0; i < L; ++i) genes[k][i] = x[i];
        }
        parallel_for(cfg.threads, lambda, [&](int k) {
            fit[k] = decode_with_plan(genes[k], plan, inst.weights).report.total;
        });
        res.evaluations += lambda;

        std::vector<int> order(lambda);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fit[a] < fit[b]; });
        if (fit[order[0]] < best_total) {
            best_total = fit[order[0]];
            res.genes = genes[order[0]];
        }

        Eigen::VectorXd old_mean = mean;
        mean.setZero();
        for (int i = 0; i < mu; ++i) mean += w[i] * X.col(order[i]);
        Eigen::VectorXd y_w = (mean - old_mean) / sigma;

        ps = (1.0 - c_sigma) * ps +
             std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * (invsqrtC * y_w);
        const double ps_norm = ps.norm();
        const bool h_sig =
            ps_norm / std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * iter)) / chiN <
            1.4 + 2.0 / (nd + 1.0);
        pc = (1.0 - c_c) * pc +
             (h_sig ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) * y_w;

        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(L, L);
        for (int i = 0; i < mu; ++i) {
            Eigen::VectorXd y = (X.col(order[i]) - old_mean) / sigma;
            rank_mu.noalias() += w[i] * (y * y.transpose());
        }
        C = (1.0 - c1 - cmu) * C +
            c1 * (pc * pc.transpose() +
                  (h_sig ? 0.0 : c_c * (2.0 - c_c)) * C) +
            cmu * rank_mu;

        sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chiN - 1.0));

        if (iter % eigen_every == 0) {
            C = (C + C.transpose()) / 2.0;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
            D = es.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
            B = es.eigenvectors();
            invsqrtC = B * D.cwiseInverse().asDiagonal() * B.transpose();
        }
        res.history.push_back({0, iter, best_total});
    }

    DecodeResult dr = decode_with_plan(res.genes, plan, inst.weights);
    res.placement = std::move(dr.placement);
    res.report = dr.report;
    return res;
}

}  // namespace amsplace

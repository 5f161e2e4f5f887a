#include "amsplace/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

#include "amsplace/detail/format.hpp"
#include "amsplace/refine.hpp"
#include "amsplace/search.hpp"

namespace amsplace {

std::vector<MethodSummary> aggregate(const std::vector<BenchRun>& runs) {
    std::vector<std::string> methods, instances;
    auto remember = [](std::vector<std::string>& seen, const std::string& s) {
        if (std::find(seen.begin(), seen.end(), s) == seen.end()) seen.push_back(s);
    };
    for (const BenchRun& r : runs) {
        remember(methods, r.method);
        remember(instances, r.instance);
    }

    // Per (method, instance): best total over repeats.
    std::map<std::pair<std::string, std::string>, double> best;
    for (const BenchRun& r : runs) {
        auto key = std::make_pair(r.method, r.instance);
        auto it = best.find(key);
        if (it == best.end() || r.total < it->second) best[key] = r.total;
    }

    std::map<std::string, double> best_known;
    for (const auto& [key, total] : best) {
        auto it = best_known.find(key.second);
        if (it == best_known.end() || total < it->second)
            best_known[key.second] = total;
    }

    std::vector<MethodSummary> out;
    for (const std::string& m : methods) {
        MethodSummary s;
        s.method = m;
        double sum = 0.0;
        int count = 0;
        for (const std::string& inst : instances) {
            auto it = best.find({m, inst});
            if (it == best.end()) continue;  // method did not run this instance
            double ref = best_known.at(inst);
            if (ref != 0.0) sum += (it->second - ref) / ref;
            ++count;
            if (it->second - ref <= 1e-9 * std::max(1.0, std::abs(ref)))
                ++s.best_hits;
        }
        s.ard_percent = count > 0 ? 100.0 * sum / count : 0.0;
        out.push_back(std::move(s));
    }
    return out;
}

std::string bench_csv(const std::vector<BenchRun>& runs) {
    std::string out =
        "record,method,instance,repeat,seed,total,wall_time_s,evaluations,"
        "feasible,ard_percent,best_hits\n";
    for (const BenchRun& r : runs)
        out += detail::fmt("run,%s,%s,%d,%llu,%.6f,%.3f,%zu,%d,,\n",
                           r.method.c_str(), r.instance.c_str(), r.repeat,
                           static_cast<unsigned long long>(r.seed), r.total,
                           r.wall_time_s, r.evaluations, r.feasible ? 1 : 0);
    for (const MethodSummary& s : aggregate(runs))
        out += detail::fmt("summary,%s,,,,,,,,%.6f,%d\n", s.method.c_str(),
                           s.ard_percent, s.best_hits);
    return out;
}

std::vector<BenchRun> run_bench(
    const std::vector<std::pair<std::string, Instance>>& instances,
    const BenchConfig& cfg) {
    for (const std::string& m : cfg.methods)
        if (m != "ga" && m != "cmaes")
            throw std::invalid_argument("run_bench: unknown method '" + m + "'");
    if (cfg.repeats < 1) throw std::invalid_argument("run_bench: repeats < 1");

    std::vector<BenchRun> rows;
    for (const auto& [label, inst] : instances) {
        for (const std::string& method : cfg.methods) {
            for (int rep = 0; rep < cfg.repeats; ++rep) {
                const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
                auto t0 = std::chrono::steady_clock::now();
                SearchResult sr;
                if (method == "ga") {
                    GAConfig gc;
                    gc.time_limit_seconds = cfg.time_limit_seconds;
                    gc.rng_seed = seed;
                    gc.threads = cfg.threads;
                    sr = run_ga(inst, gc);
                } else {
                    CMAConfig cc;
                    cc.time_limit_seconds = cfg.time_limit_seconds;
                    cc.rng_seed = seed;
                    cc.threads = cfg.threads;
                    sr = run_cmaes(inst, cc);
                }
                BenchRun row;
                row.method = method;
                row.instance = label;
                row.repeat = rep;
                row.seed = seed;
                row.evaluations = sr.evaluations;
                if (cfg.refine) {
                    RefineResult rr = refine_pipeline(sr.genes, inst, inst.weights);
                    row.total = rr.report.total;
                    row.feasible = check_feasible(rr.placement, inst).ok;
                } else {
                    row.total = sr.report.total;
                    row.feasible = check_feasible(sr.placement, inst).ok;
                }
                row.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  t0)
                        .count();
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

}  // namespace amsplace

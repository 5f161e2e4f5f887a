#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amsplace/model.hpp"

namespace amsplace {

// One (method, instance, repeat) benchmark result.
struct BenchRun {
    std::string method;
    std::string instance;
    int repeat = 0;
    std::uint64_t seed = 0;
    double total = 0.0;
    double wall_time_s = 0.0;
    std::size_t evaluations = 0;
    bool feasible = false;
};

struct MethodSummary {
    std::string method;
    double ard_percent = 0.0;  // average relative difference vs best known
    int best_hits = 0;         // instances where the method attains best known
};

// Best-known total per instance is the minimum achieved by any method over
// all repeats. A method's score on an instance is its own best repeat, and
//
//   aRD = 100/|S| * sum_i (L_i_method - L_i_best) / L_i_best
//
// over the instances the method ran. Ties within 1e-9 relative count as
// best-known hits. Methods are reported in order of first appearance.
std::vector<MethodSummary> aggregate(const std::vector<BenchRun>& runs);

// CSV document: a header, one "run" row per entry, then one "summary" row per
// method, distinguished by the leading record column. Deterministic output.
std::string bench_csv(const std::vector<BenchRun>& runs);

struct BenchConfig {
    std::vector<std::string> methods;  // subset of {"ga", "cmaes"}
    double time_limit_seconds = 10.0;
    int repeats = 3;
    std::uint64_t seed = 1;
    bool refine = true;
    int threads = 1;
};

// Runs every configured method on every labelled instance `repeats` times
// (seed + repeat index) and collects the rows in a deterministic order.
std::vector<BenchRun> run_bench(
    const std::vector<std::pair<std::string, Instance>>& instances,
    const BenchConfig& cfg);

}  // namespace amsplace

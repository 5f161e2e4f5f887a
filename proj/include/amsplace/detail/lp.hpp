#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace amsplace::detail {

// Inequality-form linear program: minimize c'v subject to G v <= h.
// Rows are stored CSR-style; duplicate columns within a row are not allowed.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> c;

    std::vector<int> row_begin{0};
    std::vector<int> col;
    std::vector<double> coef;
    std::vector<double> rhs;

    int num_rows() const { return static_cast<int>(rhs.size()); }

    void add_row(const std::vector<std::pair<int, double>>& entries, double h) {
        for (const auto& [c_, a] : entries) {
            col.push_back(c_);
            coef.push_back(a);
        }
        row_begin.push_back(static_cast<int>(col.size()));
        rhs.push_back(h);
    }
};

struct LpResult {
    bool ok = false;
    std::vector<double> v;
    double objective = 0.0;
    int iterations = 0;
};

// Primal-dual interior-point solve (Mehrotra predictor-corrector) warm-started
// at `v0` (any point; the method is infeasible-start). Returns ok=false when
// the tolerances are not reached within max_iters or a factorization fails.
LpResult solve_lp(const LpProblem& lp, const std::vector<double>& v0,
                  double tol = 1e-9, int max_iters = 60);

}  // namespace amsplace::detail

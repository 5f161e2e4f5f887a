#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amsplace/decoder.hpp"
#include "amsplace/evaluator.hpp"
#include "amsplace/model.hpp"

namespace amsplace {

// One of the four axis separations a feasible pair must satisfy.
enum class Relation : std::uint8_t { LeftOf, Below, RightOf, Above };

// The per-pair relation with the largest slack in a given placement, plus the
// active margin. Always satisfiable: the source placement satisfies it.
struct RelationAssignment {
    int n = 0;
    std::vector<Relation> rel;     // upper triangle, pair_index(i, j)
    std::vector<coord_t> margin;

    static std::size_t pair_index(int i, int j, int n) {
        return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }
};

// Slack of a relation = rhs - lhs of its inequality (>= 0 when satisfied).
// Ties are broken by the fixed order LeftOf, Below, RightOf, Above.
RelationAssignment extract_relations(const Placement& p, const Instance& inst);

// Evaluation budgets for the improvement pipeline. A zero budget turns the
// stage into the identity; lp_rounds == 0 skips the LP stage.
struct RefineBudgets {
    std::uint64_t variants_evals = 20000;
    std::uint64_t positions_evals = 20000;
    std::uint64_t layout_evals = 50000;
    int positions_max_n = 60;
    int lp_rounds = 8;
};

struct StageReport {
    std::string name;
    double before = 0.0;
    double after = 0.0;
    std::uint64_t evals = 0;
};

// First-improvement sweeps retargeting one variant gene at a time.
Chromosome ls_variants(const Chromosome& best, const Instance& inst,
                       const CostWeights& cw, std::uint64_t budget,
                       std::uint64_t* evals_out = nullptr);

// 2-opt over position-gene swaps; identity when n > max_n.
Chromosome ls_positions(const Chromosome& best, const Instance& inst,
                        const CostWeights& cw, std::uint64_t budget, int max_n = 60,
                        std::uint64_t* evals_out = nullptr);

// Placement-space relocation: remove one item, rebuild the point set from the
// remaining corners, and slide it back in everywhere; keep the best strictly
// improving position. Symmetry groups move as rigid outlines.
Placement ls_layout(const Placement& p, const Instance& inst, const CostWeights& cw,
                    std::uint64_t budget, std::uint64_t* evals_out = nullptr);

// Fixed-relation LP compaction with floor rounding and a repair sweep.
// Guarded: returns its input whenever the LP fails, the rounded placement is
// infeasible, or the criterion does not strictly decrease. Iterates
// extract/solve/round internally until a fixpoint (at most max_rounds times),
// which makes the operation idempotent.
Placement lp_refine(const Placement& p, const Instance& inst, const CostWeights& cw,
                    int max_rounds = 8);

struct RefineResult {
    Placement placement;
    CriterionReport report;
    std::vector<StageReport> stages;
};

// ls_variants -> ls_positions (gated) -> ls_layout -> lp_refine.
RefineResult refine_pipeline(const Chromosome& best, const Instance& inst,
                             const CostWeights& cw, const RefineBudgets& budgets = {});

}  // namespace amsplace

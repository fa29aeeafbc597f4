#pragma once

#include "erx/cnf.hpp"
#include "erx/corpus.hpp"
#include "erx/metrics.hpp"
#include "erx/patterns.hpp"

#include <optional>
#include <span>

namespace erx {

/// At-least-one clause plus pairwise at-most-one: 1 + k(k-1)/2 clauses.
void encode_exactly_one(CnfInstance& cnf, std::span<const Lit> vars);

/// Local pattern constraints for every in-grid input position. Requires `cnf`
/// to carry a grid variable map whose tile count matches the rule set.
void encode_patterns(CnfInstance& cnf, const RuleSet& rules);

/// Sequential counter over `indicators` restricting lo <= popcount <= hi.
/// Counter bits are fully defined by the indicators, so the projection onto
/// the indicators is exact.
void encode_cardinality(CnfInstance& cnf, std::span<const Lit> indicators, int lo, int hi);

/// Full generation task: one tile per cell, pattern rules, and optional
/// density / difficulty count bounds. Leaving both bounds empty gives the
/// unconstrained (random baseline) task.
CnfInstance encode_task(int width, int height, const RuleSet& rules, const TileCatalog& catalog,
                        std::optional<CountRange> density_bounds,
                        std::optional<CountRange> difficulty_bounds);

/// Reads the grid back out of a model. Throws if a cell has zero or several
/// true tile variables.
TileGrid decode(const Model& model, const CnfInstance& cnf);

}  // namespace erx

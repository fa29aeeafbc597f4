#pragma once

#include "erx/corpus.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace erx {

enum class TemplateKind { ring, block2, nbr_plus };

std::string_view template_name(TemplateKind kind);

/// Accepts "ring", "block2", "nbr_plus" and "nbr-plus".
TemplateKind parse_template(std::string_view name);

inline constexpr TemplateKind kAllTemplates[] = {TemplateKind::ring, TemplateKind::block2,
                                                 TemplateKind::nbr_plus};

/// Column/row displacement from the input tile.
struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Output locations constrained together by one rule.
struct OffsetGroup {
    std::vector<Offset> offsets;
    friend bool operator==(const OffsetGroup&, const OffsetGroup&) = default;
};

/// Input tile sits at (0, 0). Joint templates have one group; nbr_plus has
/// four singleton groups, each constrained independently.
struct TemplateShape {
    std::vector<OffsetGroup> groups;
    friend bool operator==(const TemplateShape&, const TemplateShape&) = default;
};

TemplateShape template_shape(TemplateKind kind);

using Tuple = std::vector<TileId>;

/// Allowed output tuples per (group, input tile). Tuples may contain the
/// catalog boundary id for out-of-grid locations.
struct RuleSet {
    TemplateKind kind = TemplateKind::nbr_plus;
    TemplateShape shape;
    std::string tile_symbols;  // catalog symbols in id order
    TileId boundary = 0;
    std::vector<std::map<TileId, std::set<Tuple>>> rules;  // indexed by group

    /// Allowed tuples for `input` in `group`, or nullptr if the input tile was never observed.
    const std::set<Tuple>* allowed(std::size_t group, TileId input) const;

    std::size_t tuple_count() const;
};

RuleSet extract_rules(const std::vector<TileGrid>& segments, const TileCatalog& catalog,
                      TemplateKind kind);
RuleSet extract_rules(const Corpus& corpus, TemplateKind kind);

struct Violation {
    int row = 0;
    int col = 0;
    std::size_t group = 0;
    TileId input = 0;
    Tuple observed;
};

/// Every (position, group) whose observed output tuple is not allowed for the
/// input tile. Empty means the grid is valid under the rule set.
std::vector<Violation> check_grid(const TileGrid& grid, const RuleSet& rules);

/// Input positions for `group` on a width x height grid: every (row, col)
/// where the input or one of its outputs lies inside the grid. Positions off
/// the grid take the boundary as their input tile, which pins the rows and
/// columns along the edges for templates that only look right and down.
std::vector<std::pair<int, int>> window_positions(int width, int height, const OffsetGroup& group);

/// Observed output tuple at (row, col) for `group`, out-of-grid read as `boundary`.
Tuple observe(const TileGrid& grid, int row, int col, const OffsetGroup& group, TileId boundary);

/// Line-oriented rule-set file; lines are sorted for stable diffs.
std::string serialize_rules(const RuleSet& rules);
RuleSet deserialize_rules(std::string_view text);

}  // namespace erx

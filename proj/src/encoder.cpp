#include "erx/encoder.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace erx {

CnfInstance::CnfInstance(int width, int height, int tile_count)
    : var_count_(width * height * tile_count), width_(width), height_(height), tile_count_(tile_count)
{
    if (width < 1 || height < 1 || tile_count < 1)
        throw Error("cnf: grid dimensions and tile count must be positive");
}

void CnfInstance::add_clause(std::span<const Lit> lits)
{
    if (lits.empty())
        throw Error("cnf: empty clause");
    starts_.push_back(lits_.size());
    for (Lit l : lits) {
        if (l == 0 || l > var_count_ || -l > var_count_) {
            lits_.resize(starts_.back());
            starts_.pop_back();
            throw Error("cnf: literal " + std::to_string(l) + " out of range");
        }
        lits_.push_back(l);
    }
}

void encode_exactly_one(CnfInstance& cnf, std::span<const Lit> vars)
{
    if (vars.empty())
        throw Error("exactly_one: empty variable list");
    cnf.add_clause(vars);
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            cnf.add_clause({-vars[i], -vars[j]});
}

void encode_patterns(CnfInstance& cnf, const RuleSet& rules)
{
    const int w = cnf.width(), h = cnf.height(), tiles = cnf.tile_count();
    if (w == 0)
        throw Error("encode_patterns: instance has no grid variable map");
    if (static_cast<int>(rules.boundary) != tiles)
        throw Error("encode_patterns: rule set tile count does not match the instance");
    if (!(rules.shape == template_shape(rules.kind)) || rules.rules.size() != rules.shape.groups.size())
        throw Error("encode_patterns: rule set shape does not match template "
                    + std::string(template_name(rules.kind)));

    std::vector<Lit> clause;
    std::vector<Lit> members;
    for (std::size_t g = 0; g < rules.shape.groups.size(); ++g) {
        const auto& offsets = rules.shape.groups[g].offsets;
        for (auto [r, c] : window_positions(w, h, rules.shape.groups[g])) {
            const bool on_grid = r >= 0 && r < h && c >= 0 && c < w;
            // Selectors are shared by all input tiles at this position and group.
            std::map<std::vector<Lit>, Lit> selectors;
            // Off the grid the input is the boundary itself, with nothing to negate.
            const int first = on_grid ? 0 : tiles;
            const int last = on_grid ? tiles - 1 : tiles;
            for (int t = first; t <= last; ++t) {
                const auto* allowed = rules.allowed(g, static_cast<TileId>(t));
                clause.clear();
                if (on_grid)
                    clause.push_back(-cnf.var(r * w + c, t));
                bool satisfied = false;
                if (allowed != nullptr) {
                    for (const auto& tuple : *allowed) {
                        members.clear();
                        bool consistent = true;
                        for (std::size_t k = 0; k < offsets.size() && consistent; ++k) {
                            int rr = r + offsets[k].dy, cc = c + offsets[k].dx;
                            bool inside = rr >= 0 && rr < h && cc >= 0 && cc < w;
                            if (!inside)
                                consistent = tuple[k] == rules.boundary;
                            else if (tuple[k] >= rules.boundary)
                                consistent = false;
                            else
                                members.push_back(cnf.var(rr * w + cc, tuple[k]));
                        }
                        if (!consistent)
                            continue;
                        if (members.empty()) {
                            satisfied = true;
                            break;
                        }
                        if (members.size() == 1) {
                            clause.push_back(members.front());
                            continue;
                        }
                        auto [it, inserted] = selectors.try_emplace(members, 0);
                        if (inserted) {
                            it->second = cnf.new_var();
                            ++cnf.selector_vars;
                            for (Lit m : members)
                                cnf.add_clause({-it->second, m});
                        }
                        clause.push_back(it->second);
                    }
                }
                if (satisfied)
                    continue;
                if (clause.empty()) {
                    // an edge the examples never show: no level fits
                    cnf.trivially_unsat = true;
                    Lit z = cnf.new_var();
                    cnf.add_clause({z});
                    cnf.add_clause({-z});
                    continue;
                }
                // Only -input left means nothing is allowed here: a unit clause.
                cnf.add_clause(clause);
            }
        }
    }
}

void encode_cardinality(CnfInstance& cnf, std::span<const Lit> indicators, int lo, int hi)
{
    const int n = static_cast<int>(indicators.size());
    if (lo > hi)
        throw Error("cardinality: lo > hi");
    if (lo < 0 || hi > n)
        throw Error("cardinality: bounds outside [0, n]");
    const int top = hi < n ? hi + 1 : lo;  // highest counter bit that is ever asserted
    if (top == 0)
        return;

    // s[i][j], 1 <= i <= n, 1 <= j <= min(i, top): at least j of the first i are true.
    std::vector<std::vector<Lit>> s(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        s[i].assign(static_cast<std::size_t>(std::min(i, top)) + 1, 0);
        for (int j = 1; j <= std::min(i, top); ++j) {
            s[i][j] = cnf.new_var();
            ++cnf.counter_vars;
        }
    }
    for (int i = 1; i <= n; ++i) {
        const Lit x = indicators[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= std::min(i, top); ++j) {
            const bool prev_has_j = j <= i - 1;
            // Counting forces the bit.
            if (prev_has_j)
                cnf.add_clause({-s[i - 1][j], s[i][j]});
            if (j == 1)
                cnf.add_clause({-x, s[i][1]});
            else
                cnf.add_clause({-x, -s[i - 1][j - 1], s[i][j]});
            // The bit forces a count.
            if (prev_has_j)
                cnf.add_clause({-s[i][j], s[i - 1][j], x});
            else
                cnf.add_clause({-s[i][j], x});
            if (j > 1) {
                if (prev_has_j)
                    cnf.add_clause({-s[i][j], s[i - 1][j], s[i - 1][j - 1]});
                else
                    cnf.add_clause({-s[i][j], s[i - 1][j - 1]});
            }
        }
    }
    if (lo > 0)
        cnf.add_clause({s[n][lo]});
    if (hi < n)
        cnf.add_clause({-s[n][hi + 1]});
}

namespace {

// Literal true iff the cell holds one of `counted`. Exactly-one per cell is
// assumed, so a single tile or a single excluded tile needs no auxiliary.
std::optional<Lit> cell_indicator(CnfInstance& cnf, int cell, const std::vector<bool>& counted)
{
    const int tiles = cnf.tile_count();
    std::vector<int> in, out;
    for (int t = 0; t < tiles; ++t)
        (counted[t] ? in : out).push_back(t);
    if (in.empty())
        return std::nullopt;
    if (in.size() == 1)
        return cnf.var(cell, in.front());
    if (out.size() == 1)
        return -cnf.var(cell, out.front());
    Lit y = cnf.new_var();
    ++cnf.indicator_vars;
    std::vector<Lit> def{-y};
    for (int t : in) {
        def.push_back(cnf.var(cell, t));
        cnf.add_clause({-cnf.var(cell, t), y});
    }
    cnf.add_clause(def);
    return y;
}

void add_count(CnfInstance& cnf, const std::vector<Lit>& indicators, CountRange bounds)
{
    const int n = static_cast<int>(indicators.size());
    if (bounds.lo > bounds.hi || bounds.lo > n || bounds.hi < 0) {
        cnf.trivially_unsat = true;
        Lit z = cnf.new_var();
        cnf.add_clause({z});
        cnf.add_clause({-z});
        return;
    }
    encode_cardinality(cnf, indicators, std::max(bounds.lo, 0), std::min(bounds.hi, n));
}

}  // namespace

CnfInstance encode_task(int width, int height, const RuleSet& rules, const TileCatalog& catalog,
                        std::optional<CountRange> density_bounds,
                        std::optional<CountRange> difficulty_bounds)
{
    if (rules.tile_symbols != catalog.symbols())
        throw Error("encode_task: rule set was extracted with a different catalog");
    const int tiles = static_cast<int>(catalog.size());
    CnfInstance cnf(width, height, tiles);
    std::vector<Lit> one_hot(static_cast<std::size_t>(tiles));
    for (int cell = 0; cell < cnf.cell_count(); ++cell) {
        for (int t = 0; t < tiles; ++t)
            one_hot[t] = cnf.var(cell, t);
        encode_exactly_one(cnf, one_hot);
    }
    encode_patterns(cnf, rules);

    if (density_bounds) {
        std::vector<bool> counted(static_cast<std::size_t>(tiles));
        for (int t = 0; t < tiles; ++t)
            counted[t] = !catalog.has(static_cast<TileId>(t), Category::background);
        std::vector<Lit> ind;
        for (int cell = 0; cell < cnf.cell_count(); ++cell)
            if (auto l = cell_indicator(cnf, cell, counted))
                ind.push_back(*l);
        add_count(cnf, ind, *density_bounds);
    }
    if (difficulty_bounds) {
        std::vector<Lit> ind;
        std::vector<bool> counted(static_cast<std::size_t>(tiles));
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c) {
                for (int t = 0; t < tiles; ++t)
                    counted[t] = counts_toward_difficulty(static_cast<TileId>(t), r, height, catalog);
                if (auto l = cell_indicator(cnf, r * width + c, counted))
                    ind.push_back(*l);
            }
        add_count(cnf, ind, *difficulty_bounds);
    }
    return cnf;
}

TileGrid decode(const Model& model, const CnfInstance& cnf)
{
    if (cnf.width() == 0)
        throw Error("decode: instance has no grid variable map");
    if (model.size() < static_cast<std::size_t>(cnf.primary_var_count()))
        throw Error("decode: model shorter than the primary variable range");
    TileGrid grid(cnf.width(), cnf.height());
    for (int cell = 0; cell < cnf.cell_count(); ++cell) {
        int found = -1;
        for (int t = 0; t < cnf.tile_count(); ++t) {
            if (!model[static_cast<std::size_t>(cnf.var(cell, t)) - 1])
                continue;
            if (found >= 0)
                throw Error("decode: cell " + std::to_string(cell) + " has several tiles");
            found = t;
        }
        if (found < 0)
            throw Error("decode: cell " + std::to_string(cell) + " has no tile");
        grid.at(cell / cnf.width(), cell % cnf.width()) = static_cast<TileId>(found);
    }
    return grid;
}

}  // namespace erx

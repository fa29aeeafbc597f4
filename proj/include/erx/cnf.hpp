#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace erx {

/// Signed DIMACS literal: +v or -v for variable v >= 1.
using Lit = int;

/// Clause list over variables 1..var_count, stored flat.
///
/// When built by the encoder, variables 1..width*height*tile_count are the
/// primary (cell, tile) indicators: var = cell * tile_count + tile + 1.
/// Everything above is auxiliary (pattern selectors, counter bits).
class CnfInstance {
public:
    CnfInstance() = default;
    explicit CnfInstance(int var_count) : var_count_(var_count) {}
    CnfInstance(int width, int height, int tile_count);

    int var_count() const { return var_count_; }
    std::size_t clause_count() const { return starts_.size(); }
    std::size_t literal_count() const { return lits_.size(); }

    std::span<const Lit> clause(std::size_t i) const
    {
        std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] : lits_.size();
        return {lits_.data() + starts_[i], end - starts_[i]};
    }

    int new_var() { return ++var_count_; }

    /// Appends a clause; throws on an empty clause or out-of-range literal.
    void add_clause(std::span<const Lit> lits);
    void add_clause(std::initializer_list<Lit> lits)
    {
        add_clause(std::span<const Lit>(lits.begin(), lits.size()));
    }

    // Grid variable map. Zero-sized when the instance is not a grid task.
    int width() const { return width_; }
    int height() const { return height_; }
    int tile_count() const { return tile_count_; }
    int cell_count() const { return width_ * height_; }
    int primary_var_count() const { return cell_count() * tile_count_; }
    int var(int cell, int tile) const { return cell * tile_count_ + tile + 1; }

    // Auxiliary bookkeeping.
    int selector_vars = 0;
    int counter_vars = 0;
    int indicator_vars = 0;

    /// Set when a count bound is infeasible before any search (e.g. lo exceeds
    /// the number of counted cells). The instance then contains x and -x.
    bool trivially_unsat = false;

    friend bool operator==(const CnfInstance& a, const CnfInstance& b)
    {
        return a.var_count_ == b.var_count_ && a.lits_ == b.lits_ && a.starts_ == b.starts_;
    }

private:
    int var_count_ = 0;
    int width_ = 0;
    int height_ = 0;
    int tile_count_ = 0;
    std::vector<Lit> lits_;
    std::vector<std::size_t> starts_;
};

/// Truth value per variable; index v - 1 holds variable v.
using Model = std::vector<bool>;

inline bool lit_value(const Model& model, Lit lit)
{
    bool v = model[static_cast<std::size_t>(lit > 0 ? lit : -lit) - 1];
    return lit > 0 ? v : !v;
}

}  // namespace erx

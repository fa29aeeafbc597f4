#include "erx/solver.hpp"

#include "erx/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <random>

namespace erx {

std::string_view status_name(SolveStatus s)
{
    switch (s) {
    case SolveStatus::sat: return "SAT";
    case SolveStatus::unsat: return "UNSAT";
    case SolveStatus::timeout: return "TIMEOUT";
    }
    return "?";
}

bool verify_model(const CnfInstance& cnf, const Model& model)
{
    if (model.size() != static_cast<std::size_t>(cnf.var_count()))
        throw Error("verify_model: model has " + std::to_string(model.size()) + " values, instance has "
                    + std::to_string(cnf.var_count()) + " variables");
    for (std::size_t i = 0; i < cnf.clause_count(); ++i) {
        auto c = cnf.clause(i);
        if (std::none_of(c.begin(), c.end(), [&](Lit l) { return lit_value(model, l); }))
            return false;
    }
    return true;
}

namespace {

using ILit = std::uint32_t;  // 2 * var + negated
using CRef = std::uint32_t;
constexpr CRef kNoReason = 0xffffffffu;
constexpr ILit kUndefLit = 0xffffffffu;

inline ILit to_ilit(Lit l) { return l > 0 ? 2u * static_cast<ILit>(l - 1) : 2u * static_cast<ILit>(-l - 1) + 1u; }
inline std::uint32_t var_of(ILit l) { return l >> 1; }

double luby(double y, int x)
{
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

class Cdcl {
public:
    Cdcl(const CnfInstance& cnf, std::uint64_t seed, std::optional<double> deadline)
        : nvars_(static_cast<std::uint32_t>(cnf.var_count())), rng_(seed)
    {
        start_ = std::chrono::steady_clock::now();
        if (deadline)
            deadline_ = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                     std::chrono::duration<double>(std::max(*deadline, 0.0)));
        value_.assign(2 * static_cast<std::size_t>(nvars_), 0);
        level_.assign(nvars_, 0);
        reason_.assign(nvars_, kNoReason);
        phase_.assign(nvars_, false);
        seen_.assign(nvars_, 0);
        activity_.assign(nvars_, 0.0);
        watches_.resize(2 * static_cast<std::size_t>(nvars_));
        heap_pos_.assign(nvars_, -1);
        for (std::uint32_t v = 0; v < nvars_; ++v) {
            activity_[v] = uniform() * 1e-3;
            phase_[v] = (rng_() >> 63) != 0;
        }
        for (std::uint32_t v = 0; v < nvars_; ++v)
            heap_insert(v);
        load(cnf);
    }

    SolveOutcome run()
    {
        SolveOutcome out;
        out.status = search();
        out.elapsed = elapsed();
        out.conflicts = conflicts_;
        out.decisions = decisions_;
        out.propagations = propagations_;
        if (out.status == SolveStatus::sat) {
            out.model.resize(nvars_);
            for (std::uint32_t v = 0; v < nvars_; ++v)
                out.model[v] = value_[2 * v] > 0;
        }
        return out;
    }

private:
    struct Watch {
        CRef cref;
        ILit blocker;
    };

    // Arena layout per clause: [size | learnt bit | deleted bit] [lbd] [activity] lits...
    static constexpr std::uint32_t kHeader = 3;

    std::uint32_t csize(CRef c) const { return arena_[c] >> 2; }
    bool clearnt(CRef c) const { return (arena_[c] & 2u) != 0; }
    bool cdeleted(CRef c) const { return (arena_[c] & 1u) != 0; }
    ILit* clits(CRef c) { return arena_.data() + c + kHeader; }
    float cactivity(CRef c) const
    {
        float f;
        std::memcpy(&f, &arena_[c + 2], sizeof f);
        return f;
    }
    void set_cactivity(CRef c, float f) { std::memcpy(&arena_[c + 2], &f, sizeof f); }

    CRef alloc_clause(const std::vector<ILit>& lits, bool learnt, std::uint32_t lbd)
    {
        CRef c = static_cast<CRef>(arena_.size());
        arena_.push_back((static_cast<std::uint32_t>(lits.size()) << 2) | (learnt ? 2u : 0u));
        arena_.push_back(lbd);
        arena_.push_back(0);
        arena_.insert(arena_.end(), lits.begin(), lits.end());
        return c;
    }

    void attach(CRef c)
    {
        ILit* l = clits(c);
        watches_[l[0] ^ 1u].push_back({c, l[1]});
        watches_[l[1] ^ 1u].push_back({c, l[0]});
    }

    std::int8_t val(ILit l) const { return value_[l]; }

    void assign(ILit l, CRef reason)
    {
        std::uint32_t v = var_of(l);
        value_[l] = 1;
        value_[l ^ 1u] = -1;
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(l);
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void load(const CnfInstance& cnf)
    {
        std::vector<ILit> lits;
        for (std::size_t i = 0; i < cnf.clause_count() && ok_; ++i) {
            lits.clear();
            bool tautology = false;
            for (Lit l : cnf.clause(i))
                lits.push_back(to_ilit(l));
            std::sort(lits.begin(), lits.end());
            lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
            for (std::size_t k = 1; k < lits.size(); ++k)
                if (lits[k] == (lits[k - 1] ^ 1u))
                    tautology = true;
            if (tautology)
                continue;
            // Drop literals already false at level 0; skip clauses already true.
            std::size_t j = 0;
            bool satisfied = false;
            for (ILit l : lits) {
                if (val(l) > 0)
                    satisfied = true;
                else if (val(l) == 0)
                    lits[j++] = l;
            }
            if (satisfied)
                continue;
            lits.resize(j);
            if (lits.empty()) {
                ok_ = false;
            } else if (lits.size() == 1) {
                assign(lits[0], kNoReason);
                if (propagate() != kNoReason)
                    ok_ = false;
            } else {
                CRef c = alloc_clause(lits, false, 0);
                attach(c);
                ++original_clauses_;
            }
        }
    }

    CRef propagate()
    {
        CRef conflict = kNoReason;
        while (qhead_ < trail_.size()) {
            ILit p = trail_[qhead_++];
            ILit false_lit = p ^ 1u;
            ++propagations_;
            auto& ws = watches_[p];
            std::size_t i = 0, j = 0;
            const std::size_t n = ws.size();
            while (i < n) {
                Watch w = ws[i];
                if (val(w.blocker) > 0) {
                    ws[j++] = ws[i++];
                    continue;
                }
                ILit* c = clits(w.cref);
                if (c[0] == false_lit)
                    std::swap(c[0], c[1]);
                ++i;
                ILit first = c[0];
                Watch nw{w.cref, first};
                if (first != w.blocker && val(first) > 0) {
                    ws[j++] = nw;
                    continue;
                }
                bool moved = false;
                const std::uint32_t sz = csize(w.cref);
                for (std::uint32_t k = 2; k < sz; ++k) {
                    if (val(c[k]) >= 0) {
                        c[1] = c[k];
                        c[k] = false_lit;
                        watches_[c[1] ^ 1u].push_back(nw);
                        moved = true;
                        break;
                    }
                }
                if (moved)
                    continue;
                ws[j++] = nw;
                if (val(first) < 0) {
                    conflict = w.cref;
                    qhead_ = trail_.size();
                    while (i < n)
                        ws[j++] = ws[i++];
                } else {
                    assign(first, w.cref);
                }
            }
            ws.resize(j);
            if (conflict != kNoReason)
                break;
        }
        return conflict;
    }

    void bump_var(std::uint32_t v)
    {
        if ((activity_[v] += var_inc_) > 1e100) {
            for (auto& a : activity_)
                a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_pos_[v] >= 0)
            heap_up(heap_pos_[v]);
    }

    void bump_clause(CRef c)
    {
        set_cactivity(c, cactivity(c) + static_cast<float>(cla_inc_));
        if (cactivity(c) > 1e20f) {
            for (CRef l : learnts_)
                set_cactivity(l, cactivity(l) * 1e-20f);
            cla_inc_ *= 1e-20;
        }
    }

    bool redundant(ILit l)
    {
        CRef r = reason_[var_of(l)];
        if (r == kNoReason)
            return false;
        ILit* c = clits(r);
        for (std::uint32_t k = 1; k < csize(r); ++k) {
            std::uint32_t v = var_of(c[k]);
            if (!seen_[v] && level_[v] > 0)
                return false;
        }
        return true;
    }

    void analyze(CRef conflict, std::vector<ILit>& learnt, int& backjump, std::uint32_t& lbd)
    {
        learnt.assign(1, kUndefLit);
        int path = 0;
        ILit p = kUndefLit;
        std::size_t index = trail_.size();
        CRef c = conflict;
        do {
            if (clearnt(c))
                bump_clause(c);
            ILit* lits = clits(c);
            for (std::uint32_t k = (p == kUndefLit ? 0 : 1); k < csize(c); ++k) {
                ILit q = lits[k];
                std::uint32_t v = var_of(q);
                if (!seen_[v] && level_[v] > 0) {
                    bump_var(v);
                    seen_[v] = 1;
                    if (level_[v] >= decision_level())
                        ++path;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[var_of(trail_[--index])]) {
            }
            p = trail_[index];
            c = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = p ^ 1u;

        analyze_toclear_.assign(learnt.begin(), learnt.end());
        std::size_t j = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            if (!redundant(learnt[i]))
                learnt[j++] = learnt[i];
        learnt.resize(j);
        for (ILit l : analyze_toclear_)
            seen_[var_of(l)] = 0;

        backjump = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])])
                    max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            backjump = level_[var_of(learnt[1])];
        }
        ++lbd_stamp_;
        lbd = 0;
        for (ILit l : learnt) {
            int lv = level_[var_of(l)];
            if (static_cast<std::size_t>(lv) >= lbd_marks_.size())
                lbd_marks_.resize(static_cast<std::size_t>(lv) + 1, 0);
            if (lbd_marks_[lv] != lbd_stamp_) {
                lbd_marks_[lv] = lbd_stamp_;
                ++lbd;
            }
        }
    }

    void cancel_until(int level)
    {
        if (decision_level() <= level)
            return;
        for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
            std::uint32_t v = var_of(trail_[i]);
            value_[2 * v] = value_[2 * v + 1] = 0;
            reason_[v] = kNoReason;
            phase_[v] = (trail_[i] & 1u) == 0;
            if (heap_pos_[v] < 0)
                heap_insert(v);
        }
        trail_.resize(trail_lim_[level]);
        trail_lim_.resize(level);
        qhead_ = trail_.size();
    }

    ILit pick_branch()
    {
        std::uint32_t next = nvars_;
        if (!heap_.empty() && uniform() < kRandomFreq) {
            std::uint32_t v = heap_[rng_() % heap_.size()];
            if (value_[2 * v] == 0)
                next = v;
        }
        while (next == nvars_ || value_[2 * next] != 0) {
            if (heap_.empty())
                return kUndefLit;
            next = heap_pop();
        }
        return 2 * next + (phase_[next] ? 0u : 1u);
    }

    bool locked(CRef c)
    {
        ILit first = clits(c)[0];
        return val(first) > 0 && reason_[var_of(first)] == c;
    }

    void reduce_db()
    {
        std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
            if (arena_[a + 1] != arena_[b + 1])
                return arena_[a + 1] > arena_[b + 1];
            return cactivity(a) < cactivity(b);
        });
        std::size_t limit = learnts_.size() / 2;
        for (std::size_t i = 0; i < limit; ++i) {
            CRef c = learnts_[i];
            if (arena_[c + 1] > 2 && !locked(c))
                arena_[c] |= 1u;
        }
        compact();
    }

    // Rebuilds the arena without deleted clauses and re-attaches watches.
    void compact()
    {
        std::vector<std::uint32_t> fresh;
        fresh.reserve(arena_.size());
        std::vector<CRef> kept_learnts;
        std::vector<std::pair<CRef, CRef>> moved;  // old -> new, in arena order
        for (CRef c = 0; c < arena_.size(); c += kHeader + csize(c)) {
            if (cdeleted(c))
                continue;
            CRef nc = static_cast<CRef>(fresh.size());
            fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + kHeader + csize(c));
            moved.emplace_back(c, nc);
            if (clearnt(c))
                kept_learnts.push_back(nc);
        }
        auto remap = [&](CRef old) -> CRef {
            auto it = std::lower_bound(moved.begin(), moved.end(), std::make_pair(old, CRef{0}));
            return it != moved.end() && it->first == old ? it->second : kNoReason;
        };
        for (ILit l : trail_) {
            auto v = var_of(l);
            if (reason_[v] != kNoReason)
                reason_[v] = remap(reason_[v]);
        }
        arena_.swap(fresh);
        learnts_.swap(kept_learnts);
        for (auto& ws : watches_)
            ws.clear();
        for (CRef c = 0; c < arena_.size(); c += kHeader + csize(c))
            attach(c);
    }

    bool out_of_time()
    {
        return deadline_ && std::chrono::steady_clock::now() >= *deadline_;
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    SolveStatus search()
    {
        if (!ok_)
            return SolveStatus::unsat;
        if (propagate() != kNoReason)
            return SolveStatus::unsat;
        std::vector<ILit> learnt;
        int restarts = 0;
        std::uint64_t restart_at = static_cast<std::uint64_t>(luby(2.0, restarts) * kRestartBase);
        std::uint64_t conflicts_since_restart = 0;
        std::uint64_t next_reduce = 2000;
        for (;;) {
            CRef conflict = propagate();
            if (out_of_time())
                return SolveStatus::timeout;
            if (conflict != kNoReason) {
                ++conflicts_;
                ++conflicts_since_restart;
                if (decision_level() == 0)
                    return SolveStatus::unsat;
                int backjump = 0;
                std::uint32_t lbd = 0;
                analyze(conflict, learnt, backjump, lbd);
                cancel_until(backjump);
                if (learnt.size() == 1) {
                    assign(learnt[0], kNoReason);
                } else {
                    CRef c = alloc_clause(learnt, true, lbd);
                    learnts_.push_back(c);
                    attach(c);
                    bump_clause(c);
                    assign(learnt[0], c);
                }
                var_inc_ /= kVarDecay;
                cla_inc_ /= kClauseDecay;
                continue;
            }
            if (conflicts_since_restart >= restart_at) {
                cancel_until(0);
                conflicts_since_restart = 0;
                restart_at = static_cast<std::uint64_t>(luby(2.0, ++restarts) * kRestartBase);
            }
            if (conflicts_ >= next_reduce) {
                next_reduce = conflicts_ + 2000 + 300 * ++reductions_;
                reduce_db();
            }
            ILit next = pick_branch();
            if (next == kUndefLit)
                return SolveStatus::sat;
            ++decisions_;
            trail_lim_.push_back(trail_.size());
            assign(next, kNoReason);
        }
    }

    // Max-heap on activity.
    bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity_[a] < activity_[b]; }

    void heap_up(int i)
    {
        std::uint32_t v = heap_[i];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (!heap_less(heap_[parent], v))
                break;
            heap_[i] = heap_[parent];
            heap_pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }

    void heap_down(int i)
    {
        std::uint32_t v = heap_[i];
        const int n = static_cast<int>(heap_.size());
        for (;;) {
            int child = 2 * i + 1;
            if (child >= n)
                break;
            if (child + 1 < n && heap_less(heap_[child], heap_[child + 1]))
                ++child;
            if (!heap_less(v, heap_[child]))
                break;
            heap_[i] = heap_[child];
            heap_pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }

    void heap_insert(std::uint32_t v)
    {
        heap_.push_back(v);
        heap_pos_[v] = static_cast<int>(heap_.size()) - 1;
        heap_up(heap_pos_[v]);
    }

    std::uint32_t heap_pop()
    {
        std::uint32_t top = heap_.front();
        heap_pos_[top] = -1;
        std::uint32_t last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_[0] = last;
            heap_pos_[last] = 0;
            heap_down(0);
        }
        return top;
    }

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    static constexpr double kVarDecay = 0.95;
    static constexpr double kClauseDecay = 0.999;
    static constexpr double kRandomFreq = 0.01;
    static constexpr double kRestartBase = 100.0;

    std::uint32_t nvars_;
    std::mt19937_64 rng_;
    std::chrono::steady_clock::time_point start_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    bool ok_ = true;

    std::vector<std::uint32_t> arena_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<std::int8_t> value_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<bool> phase_;
    std::vector<char> seen_;
    std::vector<ILit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<ILit> analyze_toclear_;
    std::vector<std::uint64_t> lbd_marks_;
    std::uint64_t lbd_stamp_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::vector<std::uint32_t> heap_;
    std::vector<int> heap_pos_;

    std::uint64_t conflicts_ = 0;
    std::uint64_t decisions_ = 0;
    std::uint64_t propagations_ = 0;
    std::uint64_t reductions_ = 0;
    std::size_t original_clauses_ = 0;
};

}  // namespace

SolveOutcome solve(const CnfInstance& cnf, std::uint64_t seed, std::optional<double> deadline_seconds)
{
    Cdcl solver(cnf, seed, deadline_seconds);
    return solver.run();
}

}  // namespace erx

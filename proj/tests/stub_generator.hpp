#pragma once

#include "erx/explorer.hpp"

#include <random>

// Deterministic stand-in for the SAT generator. Levels are W x 2 over the
// tiles {'-', 'X', 'E'} with a solid bottom row, so density = W + (non-'-'
// tiles on top) and difficulty = number of 'E' on top. A cell is UNSAT when no
// top row fits its bounds.
struct StubGenerator {
    erx::TileCatalog catalog;
    erx::AxesSpec axes;
    int width = 10;
    double fail_rate = 0.0;     // extra UNSAT answers, drawn from the seed
    double timeout_rate = 0.0;  // TIMEOUT answers, drawn from the seed

    StubGenerator()
    {
        catalog.add('-', erx::Category::background | erx::Category::passable);
        catalog.add('X', static_cast<erx::CategorySet>(erx::Category::solid));
        catalog.add('E', erx::Category::enemy | erx::Category::passable);
        axes.density_min = 10;
        axes.density_max = 20;
        axes.density_bin_width = 2;
        axes.difficulty_min = 0;
        axes.difficulty_max = 10;
        axes.difficulty_bin_width = 2;
    }

    erx::GenerationResult operator()(std::optional<erx::CellKey> cell, std::uint64_t seed, double) const
    {
        using erx::SolveStatus;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        erx::GenerationResult out;
        out.elapsed = 1.0;
        if (u(rng) < timeout_rate) {
            out.status = SolveStatus::timeout;
            return out;
        }
        if (u(rng) < fail_rate) {
            out.status = SolveStatus::unsat;
            return out;
        }
        int top_filled, enemies;
        if (cell) {
            auto d = axes.density_range(*cell);
            auto h = axes.difficulty_range(*cell);
            // pick the smallest density that can hold the minimum difficulty
            top_filled = std::max(d.lo - width, h.lo);
            enemies = h.lo;
            if (top_filled + width > d.hi || top_filled > width) {
                out.status = SolveStatus::unsat;
                return out;
            }
        } else {
            top_filled = std::uniform_int_distribution<int>(0, width - 1)(rng);
            enemies = std::uniform_int_distribution<int>(0, top_filled)(rng);
        }
        erx::TileGrid g(width, 2, 0);
        for (int c = 0; c < width; ++c)
            g.at(1, c) = 1;
        for (int c = 0; c < top_filled; ++c)
            g.at(0, c) = c < enemies ? 2 : 1;
        out.status = SolveStatus::sat;
        out.level = g;
        return out;
    }
};

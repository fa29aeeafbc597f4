#pragma once

#include "erx/corpus.hpp"

#include <vector>

namespace erx {

struct PhysicsSpec {
    int max_jump_height = 4;
    int max_jump_span = 4;
    CategorySet passable = static_cast<CategorySet>(Category::passable);
    CategorySet support = static_cast<CategorySet>(Category::solid);

    void validate() const;
};

enum class MoveKind { walk, fall, jump };

const char* move_name(MoveKind kind);

struct GridPos {
    int row = 0;
    int col = 0;
    friend bool operator==(const GridPos&, const GridPos&) = default;
};

/// One macro move. `cost` is the number of tiles traversed along the move's
/// trajectory: 1 for a walk, 1 + drop for a fall, rise + span + descent for a jump.
struct Move {
    GridPos to;
    MoveKind kind = MoveKind::walk;
    int cost = 1;
};

struct PathResult {
    bool playable = false;
    GridPos start;
    std::vector<Move> moves;
    int length = 0;  // sum of move costs, in tiles
    int jumps = 0;
};

/// Implicit movement graph over standing positions: passable cells directly
/// above a support tile.
///
/// Jumps use an envelope model. From standing cell (r, c) the player rises in
/// its column to an apex row a (r - max_jump_height <= a <= min(r - 1, landing
/// row)), crosses row a to the landing column, then descends to the landing
/// cell. Every traversed cell must be passable. Horizontal reach is at most
/// max_jump_span columns.
class MoveGraph {
public:
    MoveGraph(const TileGrid& grid, const TileCatalog& catalog, const PhysicsSpec& physics);

    bool passable(int row, int col) const;
    bool supported(int row, int col) const;

    /// Successors in the fixed order: walk right, jump right by increasing
    /// span, fall right, fall left, walk left, jump left by increasing span.
    std::vector<Move> successors(GridPos from) const;

    int width() const { return grid_.width(); }
    int height() const { return grid_.height(); }

private:
    void add_jumps(GridPos from, int dir, std::vector<Move>& out) const;
    void add_fall(GridPos from, int dir, std::vector<Move>& out) const;

    const TileGrid& grid_;
    const TileCatalog& catalog_;
    PhysicsSpec physics_;
};

/// Start set: standing cells of the leftmost column that has any. Goal set:
/// standing cells of the rightmost column.
std::vector<GridPos> start_cells(const MoveGraph& graph);
std::vector<GridPos> goal_cells(const MoveGraph& graph);

/// Least-cost path from the start set to the goal set (uniform-cost search,
/// ties broken by successor order).
PathResult find_path(const TileGrid& grid, const TileCatalog& catalog, const PhysicsSpec& physics);

}  // namespace erx

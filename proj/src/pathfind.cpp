#include "erx/pathfind.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

namespace erx {

void PhysicsSpec::validate() const
{
    if (max_jump_height < 1 || max_jump_span < 1)
        throw Error("physics: jump height and span must be >= 1");
}

const char* move_name(MoveKind kind)
{
    switch (kind) {
    case MoveKind::walk: return "walk";
    case MoveKind::fall: return "fall";
    case MoveKind::jump: return "jump";
    }
    return "?";
}

MoveGraph::MoveGraph(const TileGrid& grid, const TileCatalog& catalog, const PhysicsSpec& physics)
    : grid_(grid), catalog_(catalog), physics_(physics)
{
}

bool MoveGraph::passable(int row, int col) const
{
    return grid_.in_bounds(row, col) && (catalog_.categories(grid_.at(row, col)) & physics_.passable) != 0;
}

bool MoveGraph::supported(int row, int col) const
{
    return passable(row, col) && grid_.in_bounds(row + 1, col)
        && (catalog_.categories(grid_.at(row + 1, col)) & physics_.support) != 0;
}

void MoveGraph::add_fall(GridPos from, int dir, std::vector<Move>& out) const
{
    const int col = from.col + dir;
    if (!passable(from.row, col) || supported(from.row, col))
        return;
    for (int r = from.row + 1; passable(r, col); ++r)
        if (supported(r, col)) {
            out.push_back({{r, col}, MoveKind::fall, 1 + (r - from.row)});
            return;
        }
}

void MoveGraph::add_jumps(GridPos from, int dir, std::vector<Move>& out) const
{
    const int r = from.row;
    for (int span = 1; span <= physics_.max_jump_span; ++span) {
        const int c2 = from.col + dir * span;
        if (c2 < 0 || c2 >= width())
            break;
        for (int r2 = std::max(0, r - physics_.max_jump_height); r2 < height(); ++r2) {
            if (!supported(r2, c2))
                continue;
            // Lowest feasible apex gives the cheapest trajectory.
            const int apex_lo = std::max(0, r - physics_.max_jump_height);
            for (int a = std::min(r - 1, r2); a >= apex_lo; --a) {
                bool clear = true;
                for (int rr = a; rr < r && clear; ++rr)
                    clear = passable(rr, from.col);
                for (int k = 1; k <= span && clear; ++k)
                    clear = passable(a, from.col + dir * k);
                for (int rr = a; rr <= r2 && clear; ++rr)
                    clear = passable(rr, c2);
                if (clear) {
                    out.push_back({{r2, c2}, MoveKind::jump, (r - a) + span + (r2 - a)});
                    break;
                }
                // A blocked takeoff column blocks every higher apex too.
                if (!passable(a, from.col))
                    break;
            }
        }
    }
}

std::vector<Move> MoveGraph::successors(GridPos from) const
{
    std::vector<Move> out;
    if (supported(from.row, from.col + 1))
        out.push_back({{from.row, from.col + 1}, MoveKind::walk, 1});
    add_jumps(from, +1, out);
    add_fall(from, +1, out);
    add_fall(from, -1, out);
    if (supported(from.row, from.col - 1))
        out.push_back({{from.row, from.col - 1}, MoveKind::walk, 1});
    add_jumps(from, -1, out);
    return out;
}

std::vector<GridPos> start_cells(const MoveGraph& graph)
{
    for (int c = 0; c < graph.width(); ++c) {
        std::vector<GridPos> cells;
        for (int r = 0; r < graph.height(); ++r)
            if (graph.supported(r, c))
                cells.push_back({r, c});
        if (!cells.empty())
            return cells;
    }
    return {};
}

std::vector<GridPos> goal_cells(const MoveGraph& graph)
{
    std::vector<GridPos> cells;
    const int c = graph.width() - 1;
    for (int r = 0; r < graph.height(); ++r)
        if (graph.supported(r, c))
            cells.push_back({r, c});
    return cells;
}

PathResult find_path(const TileGrid& grid, const TileCatalog& catalog, const PhysicsSpec& physics)
{
    MoveGraph graph(grid, catalog, physics);
    PathResult result;
    const int w = grid.width();
    const auto n = grid.size();
    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dist(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<Move> via(n);
    std::vector<char> done(n, 0);
    std::vector<char> is_goal(n, 0);
    for (auto g : goal_cells(graph))
        is_goal[static_cast<std::size_t>(g.row * w + g.col)] = 1;

    // (cost, insertion order, cell): FIFO among equal costs keeps it deterministic.
    using Entry = std::tuple<int, std::uint64_t, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::uint64_t order = 0;
    for (auto s : start_cells(graph)) {
        int id = s.row * w + s.col;
        dist[id] = 0;
        open.emplace(0, order++, id);
    }
    int reached = -1;
    while (!open.empty()) {
        auto [d, _, id] = open.top();
        open.pop();
        if (done[id])
            continue;
        done[id] = 1;
        if (is_goal[id]) {
            reached = id;
            break;
        }
        for (const auto& m : graph.successors({id / w, id % w})) {
            int to = m.to.row * w + m.to.col;
            if (d + m.cost < dist[to]) {
                dist[to] = d + m.cost;
                parent[to] = id;
                via[to] = m;
                open.emplace(dist[to], order++, to);
            }
        }
    }
    if (reached < 0)
        return result;

    result.playable = true;
    result.length = dist[reached];
    for (int id = reached; parent[id] >= 0; id = parent[id])
        result.moves.push_back(via[id]);
    std::reverse(result.moves.begin(), result.moves.end());
    int first = reached;
    while (parent[first] >= 0)
        first = parent[first];
    result.start = {first / w, first % w};
    result.jumps = static_cast<int>(std::count_if(result.moves.begin(), result.moves.end(),
                                                  [](const Move& m) { return m.kind == MoveKind::jump; }));
    return result;
}

}  // namespace erx

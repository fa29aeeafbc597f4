#include "erx/patterns.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <tuple>

namespace erx {

std::string_view template_name(TemplateKind kind)
{
    switch (kind) {
    case TemplateKind::ring: return "ring";
    case TemplateKind::block2: return "block2";
    case TemplateKind::nbr_plus: return "nbr_plus";
    }
    return "?";
}

TemplateKind parse_template(std::string_view name)
{
    if (name == "ring")
        return TemplateKind::ring;
    if (name == "block2")
        return TemplateKind::block2;
    if (name == "nbr_plus" || name == "nbr-plus")
        return TemplateKind::nbr_plus;
    throw Error("unknown template '" + std::string(name) + "' (expected ring, block2 or nbr_plus)");
}

TemplateShape template_shape(TemplateKind kind)
{
    switch (kind) {
    case TemplateKind::ring:
        return {{{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}}}};
    case TemplateKind::block2:
        return {{{{{1, 0}, {0, 1}, {1, 1}}}}};
    case TemplateKind::nbr_plus:
        return {{{{{0, -1}}}, {{{0, 1}}}, {{{-1, 0}}}, {{{1, 0}}}}};
    }
    throw Error("invalid template kind");
}

const std::set<Tuple>* RuleSet::allowed(std::size_t group, TileId input) const
{
    const auto& m = rules.at(group);
    auto it = m.find(input);
    return it == m.end() ? nullptr : &it->second;
}

std::size_t RuleSet::tuple_count() const
{
    std::size_t n = 0;
    for (const auto& m : rules)
        for (const auto& [_, tuples] : m)
            n += tuples.size();
    return n;
}

Tuple observe(const TileGrid& grid, int row, int col, const OffsetGroup& group, TileId boundary)
{
    Tuple t;
    t.reserve(group.offsets.size());
    for (const auto& o : group.offsets)
        t.push_back(grid.at_or(row + o.dy, col + o.dx, boundary));
    return t;
}

std::vector<std::pair<int, int>> window_positions(int width, int height, const OffsetGroup& group)
{
    int reach = 0;
    for (const auto& o : group.offsets)
        reach = std::max({reach, std::abs(o.dx), std::abs(o.dy)});
    auto inside = [&](int r, int c) { return r >= 0 && r < height && c >= 0 && c < width; };
    std::vector<std::pair<int, int>> out;
    for (int r = -reach; r < height + reach; ++r)
        for (int c = -reach; c < width + reach; ++c) {
            bool touches = inside(r, c);
            for (const auto& o : group.offsets)
                touches = touches || inside(r + o.dy, c + o.dx);
            if (touches)
                out.emplace_back(r, c);
        }
    return out;
}

RuleSet extract_rules(const std::vector<TileGrid>& segments, const TileCatalog& catalog,
                      TemplateKind kind)
{
    if (segments.empty())
        throw Error("extract_rules: empty corpus");
    RuleSet rs;
    rs.kind = kind;
    rs.shape = template_shape(kind);
    rs.tile_symbols = catalog.symbols();
    rs.boundary = catalog.boundary();
    rs.rules.resize(rs.shape.groups.size());
    for (const auto& seg : segments)
        for (std::size_t g = 0; g < rs.shape.groups.size(); ++g) {
            const auto& group = rs.shape.groups[g];
            for (auto [r, c] : window_positions(seg.width(), seg.height(), group))
                rs.rules[g][seg.at_or(r, c, rs.boundary)].insert(observe(seg, r, c, group, rs.boundary));
        }
    return rs;
}

RuleSet extract_rules(const Corpus& corpus, TemplateKind kind)
{
    return extract_rules(corpus.segments, corpus.catalog, kind);
}

std::vector<Violation> check_grid(const TileGrid& grid, const RuleSet& rules)
{
    std::vector<Violation> out;
    for (std::size_t g = 0; g < rules.shape.groups.size(); ++g) {
        const auto& group = rules.shape.groups[g];
        for (auto [r, c] : window_positions(grid.width(), grid.height(), group)) {
            TileId input = grid.at_or(r, c, rules.boundary);
            auto observed = observe(grid, r, c, group, rules.boundary);
            const auto* allowed = rules.allowed(g, input);
            if (allowed == nullptr || allowed->count(observed) == 0)
                out.push_back({r, c, g, input, std::move(observed)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.row, a.col, a.group) < std::tie(b.row, b.col, b.group);
    });
    return out;
}

// Format:
//   erx-rules 1
//   kind <name>
//   tiles <symbols in id order>
//   boundary <id>
//   group <index> <dx>,<dy> ...
//   allow <group> <input id> <id>,<id>,...
std::string serialize_rules(const RuleSet& rules)
{
    std::ostringstream os;
    os << "erx-rules 1\n";
    os << "kind " << template_name(rules.kind) << '\n';
    os << "tiles " << rules.tile_symbols << '\n';
    os << "boundary " << rules.boundary << '\n';
    for (std::size_t g = 0; g < rules.shape.groups.size(); ++g) {
        os << "group " << g;
        for (const auto& o : rules.shape.groups[g].offsets)
            os << ' ' << o.dx << ',' << o.dy;
        os << '\n';
    }
    for (std::size_t g = 0; g < rules.rules.size(); ++g)
        for (const auto& [input, tuples] : rules.rules[g])
            for (const auto& t : tuples) {
                os << "allow " << g << ' ' << input << ' ';
                for (std::size_t i = 0; i < t.size(); ++i)
                    os << (i ? "," : "") << t[i];
                os << '\n';
            }
    return os.str();
}

RuleSet deserialize_rules(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        return Error("rules line " + std::to_string(line_no) + ": " + msg);
    };
    if (!std::getline(in, line) || line != "erx-rules 1")
        throw Error("rules: missing 'erx-rules 1' header");
    ++line_no;
    RuleSet rs;
    bool have_kind = false;
    std::vector<OffsetGroup> groups;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "kind") {
            std::string name;
            ls >> name;
            rs.kind = parse_template(name);
            have_kind = true;
        } else if (key == "tiles") {
            ls >> rs.tile_symbols;
        } else if (key == "boundary") {
            if (!(ls >> rs.boundary))
                throw fail("bad boundary id");
        } else if (key == "group") {
            std::size_t idx = 0;
            if (!(ls >> idx) || idx != groups.size())
                throw fail("groups must be listed in order");
            OffsetGroup g;
            std::string tok;
            while (ls >> tok) {
                Offset o;
                char comma = 0;
                std::istringstream ts(tok);
                if (!(ts >> o.dx >> comma >> o.dy) || comma != ',')
                    throw fail("bad offset '" + tok + "'");
                g.offsets.push_back(o);
            }
            groups.push_back(std::move(g));
        } else if (key == "allow") {
            std::size_t g = 0;
            unsigned input = 0;
            std::string tok;
            if (!(ls >> g >> input >> tok) || g >= groups.size())
                throw fail("bad allow line");
            Tuple t;
            std::istringstream ts(tok);
            std::string item;
            while (std::getline(ts, item, ','))
                t.push_back(static_cast<TileId>(std::stoul(item)));
            if (t.size() != groups[g].offsets.size())
                throw fail("tuple arity does not match group");
            if (rs.rules.size() < groups.size())
                rs.rules.resize(groups.size());
            rs.rules[g][static_cast<TileId>(input)].insert(std::move(t));
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    if (!have_kind)
        throw Error("rules: missing kind");
    rs.shape.groups = std::move(groups);
    rs.rules.resize(rs.shape.groups.size());
    if (!(rs.shape == template_shape(rs.kind)))
        throw Error("rules: shape does not match template " + std::string(template_name(rs.kind)));
    if (rs.boundary != rs.tile_symbols.size())
        throw Error("rules: boundary id must equal the tile count");
    return rs;
}

}  // namespace erx

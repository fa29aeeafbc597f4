#include "erx/report.hpp"

#include <cstdio>
#include <sstream>

namespace erx {

namespace {

std::optional<double> mean(double sum, std::size_t n)
{
    if (n == 0)
        return std::nullopt;
    return sum / static_cast<double>(n);
}

std::string fmt_opt(const std::optional<double>& v)
{
    if (!v)
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

std::string csv_char(char c)
{
    if (c == ',' || c == '"')
        return std::string("\"") + (c == '"' ? "\"\"" : ",") + "\"";
    return std::string(1, c);
}

}  // namespace

AttemptStats attempt_table(const std::vector<AttemptRecord>& log)
{
    AttemptStats s;
    double solve_sum = 0, fail_sum = 0, all_sum = 0;
    for (const auto& rec : log) {
        ++s.total;
        all_sum += rec.elapsed;
        switch (rec.outcome) {
        case AttemptOutcome::success:
            ++s.successful;
            solve_sum += rec.elapsed;
            break;
        case AttemptOutcome::failed:
            ++s.failed;
            fail_sum += rec.elapsed;
            break;
        case AttemptOutcome::timed_out:
            ++s.timed_out;
            break;
        }
    }
    s.mean_solve_time = mean(solve_sum, s.successful);
    s.mean_fail_time = mean(fail_sum, s.failed);
    s.mean_time = mean(all_sum, s.total);
    return s;
}

int Histogram::total() const
{
    int n = out_of_range;
    for (const auto& [_, c] : counts)
        n += c;
    return n;
}

Histogram histogram(const std::vector<TileGrid>& levels, const TileCatalog& catalog, const AxesSpec& axes)
{
    axes.validate();
    Histogram h;
    for (const auto& cell : axes.all_cells())
        h.counts[cell] = 0;
    for (const auto& level : levels) {
        if (auto cell = bin_cell(density(level, catalog), difficulty(level, catalog), axes))
            ++h.counts[*cell];
        else
            ++h.out_of_range;
    }
    return h;
}

const char* origin_name(Origin o)
{
    return o == Origin::initial ? "initial" : "generated";
}

std::vector<InterestRow> interestingness_table(const std::vector<TileGrid>& levels,
                                               const std::vector<Origin>& origins,
                                               const TileCatalog& catalog, const PhysicsSpec& physics)
{
    if (levels.size() != origins.size())
        throw Error("interestingness_table: one origin tag per level required");
    std::vector<InterestRow> rows;
    std::vector<double> raw;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        InterestRow row;
        row.density = density(levels[i], catalog);
        row.difficulty = difficulty(levels[i], catalog);
        row.raw = interestingness_raw(find_path(levels[i], catalog, physics));
        row.origin = origins[i];
        raw.push_back(row.raw);
        rows.push_back(row);
    }
    if (!rows.empty()) {
        auto norm = normalize(raw);
        for (std::size_t i = 0; i < rows.size(); ++i)
            rows[i].normalized = norm[i];
    }
    return rows;
}

TileFrequencyGrid tile_frequency(const std::vector<TileGrid>& levels)
{
    if (levels.empty())
        throw Error("tile_frequency: empty level set");
    TileFrequencyGrid f;
    f.width = levels.front().width();
    f.height = levels.front().height();
    f.cells.resize(levels.front().size());
    for (const auto& level : levels) {
        if (level.width() != f.width || level.height() != f.height)
            throw Error("tile_frequency: level dimensions differ");
        for (std::size_t i = 0; i < level.size(); ++i)
            f.cells[i][level.cells()[i]] += 1.0;
    }
    const double n = static_cast<double>(levels.size());
    for (auto& cell : f.cells)
        for (auto& [_, v] : cell)
            v /= n;
    return f;
}

std::string attempts_csv(const std::vector<std::pair<std::string, AttemptStats>>& rows)
{
    std::ostringstream os;
    os << "template,total_attempts,successful_attempts,failed_attempts,timed_out_attempts,"
          "average_solve_time_s,average_fail_time_s,average_time_s\n";
    for (const auto& [name, s] : rows)
        os << name << ',' << s.total << ',' << s.successful << ',' << s.failed << ',' << s.timed_out << ','
           << fmt_opt(s.mean_solve_time) << ',' << fmt_opt(s.mean_fail_time) << ',' << fmt_opt(s.mean_time)
           << '\n';
    return os.str();
}

std::string histogram_csv(const std::vector<std::pair<Origin, Histogram>>& parts)
{
    std::ostringstream os;
    os << "density_bin,difficulty_bin,count,origin\n";
    for (const auto& [origin, h] : parts) {
        for (const auto& [cell, n] : h.counts)
            os << cell.density_bin << ',' << cell.difficulty_bin << ',' << n << ',' << origin_name(origin) << '\n';
        os << "-1,-1," << h.out_of_range << ',' << origin_name(origin) << '\n';
    }
    return os.str();
}

std::string interestingness_csv(const std::vector<InterestRow>& rows)
{
    std::ostringstream os;
    os << "density,difficulty,norm_interest,origin\n";
    char buf[32];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.normalized);
        os << r.density << ',' << r.difficulty << ',' << buf << ',' << origin_name(r.origin) << '\n';
    }
    return os.str();
}

std::string tilefreq_csv(const TileFrequencyGrid& freq, const TileCatalog& catalog)
{
    std::ostringstream os;
    os << "row,col,tile_char,fraction\n";
    char buf[32];
    for (int r = 0; r < freq.height; ++r)
        for (int c = 0; c < freq.width; ++c)
            for (const auto& [tile, v] : freq.at(r, c)) {
                std::snprintf(buf, sizeof buf, "%.6f", v);
                os << r << ',' << c << ',' << csv_char(catalog.symbol(tile)) << ',' << buf << '\n';
            }
    return os.str();
}

}  // namespace erx

#pragma once

#include <string>

#include "fpinc/incidence.hpp"
#include "fpinc/sumprod.hpp"

namespace fpinc {

// CSV rows "x,y". Coordinates must lie in [0, p); duplicate rows are a
// DataError.
PointSet load_points(const PlaneContext& ctx, const std::string& path);
// CSV rows "a,b,c", canonicalized on load; rows that collapse to the same
// canonical line are a DataError.
LineSet load_lines(const PlaneContext& ctx, const std::string& path);

void save_points(const PointSet& P, const std::string& path);
void save_lines(const LineSet& L, const std::string& path);

struct LoadedGrid {
    std::uint64_t p = 0;
    GridInstance grid;
};

// JSON object {"p": u64, "A": [...], "B": [...], "G": [[a, b], ...],
// "lambda": u64 (optional)}.
LoadedGrid load_grid(const std::string& path);
void save_grid(const GridInstance& g, const std::string& path);

} // namespace fpinc

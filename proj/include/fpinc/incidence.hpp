#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fpinc/field_plane.hpp"

namespace fpinc {

// Sorted duplicate-free point set; membership by binary search.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::vector<AffinePoint> pts);

    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    bool contains(const AffinePoint& p) const;
    // Index into items() for a member; size() when absent.
    std::size_t index_of(const AffinePoint& p) const;
    const AffinePoint& operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<AffinePoint>& items() const { return pts_; }
    auto begin() const { return pts_.begin(); }
    auto end() const { return pts_.end(); }
    bool operator==(const PointSet&) const = default;

private:
    std::vector<AffinePoint> pts_;
};

// Sorted duplicate-free set of canonical lines.
class LineSet {
public:
    LineSet() = default;
    explicit LineSet(std::vector<AffLine> lines);

    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }
    bool contains(const AffLine& l) const;
    std::size_t index_of(const AffLine& l) const;
    const AffLine& operator[](std::size_t i) const { return lines_[i]; }
    const std::vector<AffLine>& items() const { return lines_; }
    auto begin() const { return lines_.begin(); }
    auto end() const { return lines_.end(); }
    bool operator==(const LineSet&) const = default;

private:
    std::vector<AffLine> lines_;
};

// Exact incidence count with both side profiles. Degrees are parallel to the
// point set, richness parallel to the line set; both sides sum to total.
struct IncidenceProfile {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> point_degree;
    std::vector<std::uint64_t> line_richness;
};

// One dyadic degree class: members' degrees lie in [level, 2*level) with
// level a power of two. mass = |selected| * level.
struct DyadicPointClass {
    PointSet selected;
    std::uint64_t level = 0;
    std::uint64_t mass = 0;
    // total incidences / mass: the log-type loss this selection realized.
    double realized_factor = 0.0;
};

// Same by line richness; here mass = |selected| * level^2.
struct DyadicLineClass {
    LineSet selected;
    std::uint64_t level = 0;
    std::uint64_t mass = 0;
    // (sum of richness^2) / mass.
    double realized_factor = 0.0;
};

// Bucketed algorithm: index points by x-column, solve each line per column.
IncidenceProfile count_incidences(const PlaneContext& ctx, const PointSet& P,
                                  const LineSet& L);
// Reference algorithm: plain pair loop. Output is identical.
IncidenceProfile count_incidences_naive(const PlaneContext& ctx, const PointSet& P,
                                        const LineSet& L);

// All lines spanned by pairs of distinct points. DataError if |P| < 2.
LineSet lines_determined(const PlaneContext& ctx, const PointSet& P);

// Line meeting the most points of P and that count; ties go to the smaller
// canonical line. DataError if |P| < 2.
std::pair<AffLine, std::uint64_t> max_collinear(const PlaneContext& ctx,
                                                const PointSet& P);

// Dyadic class of points maximizing |class| * level; ties go to the smaller
// level. DataError if I(P,L) = 0.
DyadicPointClass dyadic_select_points(const PlaneContext& ctx, const PointSet& P,
                                      const LineSet& L);

// Dyadic class of lines maximizing |class| * level^2 against richness in P;
// ties go to the smaller level. DataError if I(P,L) = 0.
DyadicLineClass dyadic_select_lines(const PlaneContext& ctx, const PointSet& P,
                                    const LineSet& L);

// Every canonical point / line of the plane (p^2 points, p^2 + p lines).
PointSet full_plane_points(const PlaneContext& ctx);
LineSet full_plane_lines(const PlaneContext& ctx);

} // namespace fpinc

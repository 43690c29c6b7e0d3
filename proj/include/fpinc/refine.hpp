#pragma once

#include <cstdint>

#include "fpinc/incidence.hpp"

namespace fpinc {

// Witness that every point of `covered` lies on one of `k` lines through the
// apex. k is minimal: it counts the distinct joining lines exactly.
struct ApexCover {
    ProjPoint apex;
    std::uint64_t k = 0;
    LineSet lines;
    PointSet covered;
};

// Points incident to at least I(P,L)/(2|P|) lines. The kept side retains at
// least half of I(P,L); that is checked exactly inside.
PointSet refine_popular_points(const PlaneContext& ctx, const PointSet& P,
                               const LineSet& L);
// Lines incident to at least I(P,L)/(2|L|) points; same halving check.
LineSet refine_popular_lines(const PlaneContext& ctx, const PointSet& P,
                             const LineSet& L);
// Points incident to at most max{4, 4|L|^2/I(P,L)} lines; keeps half of I.
PointSet refine_bounded_points(const PlaneContext& ctx, const PointSet& P,
                               const LineSet& L);
// Lines incident to at most max{4, 4|P|^2/I(P,L)} points; keeps half of I.
LineSet refine_bounded_lines(const PlaneContext& ctx, const PointSet& P,
                             const LineSet& L);

// Points of P (other than p) whose joining line with p belongs to L.
// DataError if p is not a member of P.
PointSet cover_set(const PlaneContext& ctx, const PointSet& P, const LineSet& L,
                   const AffinePoint& p);

struct CoverBase {
    PointSet base;
    std::uint64_t min_cover = 0;   // min over the base of the cover-set size
    double ratio = 0.0;            // min_cover * |L| / (K^2 * |P|)
};

// Popularity-refines lines then points, and returns the surviving points
// together with the smallest cover-set size among them. Requires every point
// of P to have degree in [K, 2K) against L.
CoverBase find_popular_cover_base(const PlaneContext& ctx, const PointSet& P,
                                  const LineSet& L, std::uint64_t K);

// Exact minimal cover of S by lines through the apex. DataError if the apex
// lies in S.
ApexCover minimal_apex_cover(const PlaneContext& ctx, const PointSet& S,
                             const ProjPoint& apex);
ApexCover minimal_apex_cover(const PlaneContext& ctx, const PointSet& S,
                             const AffinePoint& apex);

struct TwoApexConfig {
    AffinePoint apex1{};
    AffinePoint apex2{};
    PointSet core;           // intersection of the two cover sets
    ApexCover cover1;        // (core, apex1)
    ApexCover cover2;        // (core, apex2)
    double size_ratio = 0.0; // |core| * |L|^2 / (K^4 * |P|)
};

// Fixed failure messages; the pipeline executor keys its terminal case off
// these strings.
inline constexpr const char* kErrNoCoverCandidate =
    "every cover set has fewer than two points";
inline constexpr const char* kErrNoTransversal =
    "every candidate transversal passes through the first apex";
inline constexpr const char* kErrEmptyCore =
    "transversal pair scan found an empty cover overlap";

// Greedy realization of the two-apex search: apex1 maximizes its cover set,
// apex2 maximizes the overlap, ties broken by point order. DataError when
// every cover set has fewer than two points.
TwoApexConfig find_two_apex_config(const PlaneContext& ctx, const PointSet& P,
                                   const LineSet& L, std::uint64_t K);

struct FourApexConfig {
    TwoApexConfig base;
    AffinePoint apex3{};
    AffinePoint apex4{};
    AffLine transversal{};   // carries apex2, apex3, apex4 but not apex1
    PointSet core;           // overlap of the apex3/apex4 cover sets in base.core
    ApexCover cover3;
    ApexCover cover4;
    double size_ratio = 0.0;             // |core| * |L|^4 / (K^8 * |P|)
    double per_line_cap = 0.0;           // |P| / K, reported not enforced
    std::uint64_t max_line_load = 0;     // max |base.core on l| over supporting lines
    bool cap_respected = true;
    std::uint64_t transversal_points = 0; // |base.core on transversal|
    std::uint64_t diagonal_sum = 0;       // sum of cover-set sizes over that line
    std::uint64_t offdiagonal_sum = 0;    // sum of pairwise cover overlaps
    bool offdiagonal_dominates = false;
};

// Continues the search from a two-apex configuration: popularity-selects the
// supporting lines through apex2, fixes a transversal avoiding apex1, and
// scans point pairs on it for the largest cover overlap. DataError when no
// transversal avoids apex1, or when no transversal carries two core points,
// or when the best overlap is empty.
FourApexConfig find_four_apex_config(const PlaneContext& ctx,
                                     const TwoApexConfig& cfg, const PointSet& P,
                                     const LineSet& L, std::uint64_t K);

} // namespace fpinc

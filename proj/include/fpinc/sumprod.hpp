#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fpinc/field_plane.hpp"
#include "fpinc/incidence.hpp"
#include "fpinc/refine.hpp"

namespace fpinc {

// A bipartite multiplicative-grid instance: row values A, column values B,
// and an edge set inside A x B. lambda records a scale already applied to the
// B side (1 when none was).
class GridInstance {
public:
    GridInstance() = default;
    // Validates: elements reduced, edges deduplicated with endpoints present.
    GridInstance(const PlaneContext& ctx, std::vector<Fe> A, std::vector<Fe> B,
                 std::vector<std::pair<Fe, Fe>> edges, Fe lambda = 1);
    static GridInstance complete(const PlaneContext& ctx, std::vector<Fe> A,
                                 std::vector<Fe> B);

    std::uint64_t p() const { return p_; }
    const std::vector<Fe>& a_values() const { return a_; }
    const std::vector<Fe>& b_values() const { return b_; }
    const std::vector<std::pair<Fe, Fe>>& edges() const { return edges_; }
    Fe lambda() const { return lambda_; }
    // Sorted neighbor list of the i-th row value.
    const std::vector<Fe>& row_neighbors(std::size_t i) const { return adj_[i]; }
    std::uint64_t row_degree(std::size_t i) const { return adj_[i].size(); }

private:
    std::uint64_t p_ = 0;
    std::vector<Fe> a_;
    std::vector<Fe> b_;
    std::vector<std::pair<Fe, Fe>> edges_;
    std::vector<std::vector<Fe>> adj_;
    Fe lambda_ = 1;
};

// { a op b : (a,b) an edge }, deduplicated. op is one of '+', '-', '*', '/'.
// For '/': DataError naming the offending edges if any edge has b = 0.
std::vector<Fe> partial_set(const PlaneContext& ctx, const GridInstance& g, char op);

// Ratio set over only the edges with nonzero second coordinate, plus the
// count of skipped edges. Never throws on zeroes.
std::pair<std::vector<Fe>, std::uint64_t> partial_ratio_defined(
    const PlaneContext& ctx, const std::vector<std::pair<Fe, Fe>>& edges);

// All pairwise differences / quotients of two plain sets.
std::vector<Fe> difference_set(const PlaneContext& ctx, const std::vector<Fe>& A,
                               const std::vector<Fe>& B);

struct EnergyReport {
    std::uint64_t energy = 0;
    std::string method;                          // "bucketed" or "brute"
    std::vector<std::pair<Fe, std::uint64_t>> histogram; // product -> pair count
};

// Ordered quadruples (a,b,c,d) with ab = cd, zeros included. Bucketed count:
// energy = sum of squared histogram entries.
EnergyReport mult_energy(const PlaneContext& ctx, const std::vector<Fe>& A);
// Reference quadruple loop; restricted to |A| <= 12.
EnergyReport mult_energy_brute(const PlaneContext& ctx, const std::vector<Fe>& A);

struct GridReduction {
    GridInstance grid;
    ProjMap tau;
    Fe applied_scale = 1;    // multiplies the second coordinate; equals grid.lambda()
    Fe pencil_gradient = 0;  // g such that a + g*b is constant on pencil lines
    // Minimal apex covers recomputed on the reduced point set, in apex order.
    std::uint64_t k1 = 0, k2 = 0, k3 = 0, k4 = 0;
    std::uint64_t diff_count = 0;
    std::uint64_t ratio_count = 0;            // over defined edges
    std::uint64_t undefined_ratio_edges = 0;
    // Both labelings of the two pencil bounds are recorded.
    bool diff_le_k2 = false, ratio_le_k1 = false;
    bool diff_le_k1 = false, ratio_le_k2 = false;
};

// Projective reduction: the frame map sends apex1 to the origin and apex3 /
// apex4 to the vertical / horizontal directions at infinity, maps pts, and
// reads the grid off the image. pts must avoid the line through apex3 and
// apex4 (DataError otherwise: some image lands at infinity). DataError when
// apex2 coincides with apex3 or apex4 or leaves the transversal.
GridReduction project_to_grid(const PlaneContext& ctx, const ProjPoint& apex1,
                              const ProjPoint& apex2, const ProjPoint& apex3,
                              const ProjPoint& apex4, const PointSet& pts);
// Same, lifting a four-apex configuration; `stripped` is the configuration's
// core minus the transversal's points, and bounds are cross-checked against
// the configuration's covers.
GridReduction project_to_grid(const PlaneContext& ctx, const FourApexConfig& cfg,
                              const PointSet& stripped);

struct PopularSubset {
    std::vector<Fe> selected;        // A'
    std::uint64_t threshold = 0;     // t: codegree floor met by the popular pairs
    double pair_fraction = 0.0;      // fraction of ordered pairs at codegree >= t
    double codegree_ratio = 0.0;     // t * |A|^2 * |B| / |G|^2
    double size_ratio = 0.0;         // |A'| * |B| / |G|
};

// Deterministic popular-subset selection: candidates are the column
// neighborhoods plus the high-degree rows; the largest candidate for which a
// (1-eps) fraction of ordered pairs shares >= t common neighbors wins, with
// the threshold then maximized. DataError when no candidate qualifies.
PopularSubset select_popular_subset(const PlaneContext& ctx, const GridInstance& g,
                                    double eps);

struct RefinedGraph {
    PopularSubset subset;
    std::vector<std::pair<Fe, Fe>> pairs;   // H: ordered pairs at codegree >= t
    std::vector<Fe> diff_set;               // A' -_H A'
    std::vector<Fe> ratio_set;              // A' /_H A' over defined edges
    std::uint64_t undefined_ratio_edges = 0;
    double diff_ratio = 0.0;   // |diff| * |G|^2 / (|A -G B|^2 |A|^2 |B|)
    double ratio_ratio = 0.0;  // |ratio| * |G|^2 / (|A /G B|^2 |A|^2 |B|), defined edges
};

// Popular subset plus its codegree graph H and the partial sets over H.
// |H| >= (1-eps)|A'|^2 is checked exactly.
RefinedGraph build_refined_graph(const PlaneContext& ctx, const GridInstance& g,
                                 double eps);

struct RegularizedDiff {
    std::vector<Fe> rows;    // high-degree rows of the first graph
    std::vector<Fe> cols;    // high-degree columns of the second
    std::vector<Fe> diff;    // full difference set rows - cols
    double bound_ratio = 0.0; // |diff| * |B| / (|A -G B| * |B -H C|)
};

// Dense-graph regularization: keeps rows with G-degree and columns with
// H-degree at least (1-sqrt(eps))|B|. Exact floors |rows| >= (1-sqrt(eps))|A|
// and |cols| >= (1-sqrt(eps))|C| are checked. DataError when either graph is
// sparser than (1-eps) or eps is outside (0, 1/4).
RegularizedDiff regularize_diff(const PlaneContext& ctx, const std::vector<Fe>& A,
                                const std::vector<Fe>& B, const std::vector<Fe>& C,
                                const std::vector<std::pair<Fe, Fe>>& G,
                                const std::vector<std::pair<Fe, Fe>>& H, double eps);

struct DenseDiff {
    std::vector<Fe> kept;    // intersection of the two regularized sides
    std::vector<Fe> diff;    // kept - kept
    double bound_ratio = 0.0; // |diff| * |A| / |A -G A|^2
};

// Specialization to one set: intersects the two regularized sides; exact
// floor |kept| >= (1-2*sqrt(eps))|A|.
DenseDiff dense_diff_refine(const PlaneContext& ctx, const std::vector<Fe>& A,
                            const std::vector<std::pair<Fe, Fe>>& G, double eps);

struct HalfBsgResult {
    RefinedGraph graph;
    std::vector<Fe> core;                      // A''
    std::vector<std::pair<Fe, Fe>> core_pairs; // H' = H on A'' x A''
    std::vector<Fe> core_diff;                 // A'' - A''
    std::vector<Fe> core_ratio;                // A'' /_{H'} A'' over defined edges
    std::uint64_t undefined_core_ratio_edges = 0;
    EnergyReport energy;                       // of A''
    double diff_ceiling_ratio = 0.0;  // |A''-A''| |G|^5 / (|A-GB|^4 |A|^4 |B|^3)
    double energy_floor_ratio = 0.0;  // E(A'') |B|^5 |A|^2 |A/GB|^2 / |G|^6
};

// The full chain: popular subset, codegree graph, dense refinement, then the
// energy floor via the exact step E(A'') * |core ratio set| >= |H'|^2.
// Requires 0 < eps < 1/16 and a nonempty edge set; DataError if the core
// ratio set has no defined edge.
HalfBsgResult half_bsg(const PlaneContext& ctx, const GridInstance& g, double eps);

struct RudnevReport {
    std::uint64_t set_size = 0;
    std::uint64_t energy = 0;
    std::uint64_t diff_size = 0;
    bool size_warning = false;   // |A|^2 >= p
    std::string numerator;       // exact E^4 / (|A-A|^7 |A|^4), lowest terms
    std::string denominator;
    double ratio = 0.0;
    bool positive_finite = false;
};

// Energy-to-difference ratio report; warns (never fails) on |A| >= sqrt(p).
// DataError on an empty set.
RudnevReport check_rudnev(const PlaneContext& ctx, const std::vector<Fe>& A);

struct PartialSumprodReport {
    std::uint64_t edge_count = 0;
    std::uint64_t a_size = 0;
    std::uint64_t b_size = 0;
    std::uint64_t diff_count = 0;
    std::uint64_t ratio_count = 0;   // defined edges
    std::uint64_t undefined_ratio_edges = 0;
    bool grid_warning = false;       // |G| > p|B|
    std::string numerator;           // exact |G|^55 / (|A|^36 |B|^37 d^28 r^8)
    std::string denominator;
    double ratio = 0.0;
    bool positive_finite = false;
};

// The fixed-exponent grid ratio in exact big-integer rationals. DataError
// when the ratio set is undefined on every edge.
PartialSumprodReport check_partial_sumprod(const PlaneContext& ctx,
                                           const GridInstance& g);

} // namespace fpinc

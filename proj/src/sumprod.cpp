#include "fpinc/sumprod.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "fpinc/errors.hpp"

namespace fpinc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::vector<Fe> normalized_set(const PlaneContext& ctx, std::vector<Fe> v,
                               const char* what) {
    for (Fe x : v) FPINC_REQUIRE(x < ctx.p(), what);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<std::pair<Fe, Fe>> normalized_edges(
    std::vector<std::pair<Fe, Fe>> e, const std::vector<Fe>& X,
    const std::vector<Fe>& Y, const char* what) {
    for (const auto& [a, b] : e) {
        FPINC_REQUIRE(std::binary_search(X.begin(), X.end(), a) &&
                          std::binary_search(Y.begin(), Y.end(), b),
                      what);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

std::vector<Fe> sorted_unique(std::vector<Fe> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

u64 distinct_diffs(const PlaneContext& ctx,
                   const std::vector<std::pair<Fe, Fe>>& edges) {
    std::vector<Fe> vals;
    vals.reserve(edges.size());
    for (const auto& [a, b] : edges) vals.push_back(ctx.sub(a, b));
    return sorted_unique(std::move(vals)).size();
}

u64 intersect_count(const std::vector<Fe>& a, const std::vector<Fe>& b) {
    u64 c = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++c;
            ++i;
            ++j;
        }
    }
    return c;
}

// ceil((1-eps) * m2) computed as m2 - floor(eps * m2), clamped to >= 1.
u64 popular_pair_floor(double eps, u64 m2) {
    const long double cut =
        std::floor(static_cast<long double>(eps) * static_cast<long double>(m2) +
                   1e-9L);
    u64 drop = static_cast<u64>(cut);
    if (drop > m2) drop = m2;
    const u64 needed = m2 - drop;
    return needed == 0 ? 1 : needed;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

GridInstance::GridInstance(const PlaneContext& ctx, std::vector<Fe> A,
                           std::vector<Fe> B,
                           std::vector<std::pair<Fe, Fe>> edges, Fe lambda)
    : p_(ctx.p()), lambda_(lambda) {
    a_ = normalized_set(ctx, std::move(A), "grid element out of range");
    b_ = normalized_set(ctx, std::move(B), "grid element out of range");
    FPINC_REQUIRE(lambda_ != 0 && lambda_ < p_,
                  "grid scale must be a nonzero field element");
    edges_ = normalized_edges(std::move(edges), a_, b_,
                              "edge endpoint missing from the grid sides");
    adj_.resize(a_.size());
    for (const auto& [a, b] : edges_) {
        const auto it = std::lower_bound(a_.begin(), a_.end(), a);
        adj_[static_cast<std::size_t>(it - a_.begin())].push_back(b);
    }
    // edges_ is sorted lexicographically, so each adjacency list is sorted.
}

GridInstance GridInstance::complete(const PlaneContext& ctx, std::vector<Fe> A,
                                    std::vector<Fe> B) {
    std::vector<Fe> a = normalized_set(ctx, std::move(A), "grid element out of range");
    std::vector<Fe> b = normalized_set(ctx, std::move(B), "grid element out of range");
    std::vector<std::pair<Fe, Fe>> edges;
    edges.reserve(a.size() * b.size());
    for (Fe x : a) {
        for (Fe y : b) edges.emplace_back(x, y);
    }
    return GridInstance(ctx, std::move(a), std::move(b), std::move(edges));
}

std::vector<Fe> partial_set(const PlaneContext& ctx, const GridInstance& g,
                            char op) {
    FPINC_REQUIRE(op == '+' || op == '-' || op == '*' || op == '/',
                  "unknown grid operation");
    if (op == '/') {
        std::string offenders;
        u64 extra = 0;
        for (const auto& [a, b] : g.edges()) {
            if (b != 0) continue;
            if (offenders.size() > 120) {
                ++extra;
                continue;
            }
            if (!offenders.empty()) offenders += ", ";
            offenders += "(" + std::to_string(a) + ",0)";
        }
        if (!offenders.empty()) {
            if (extra > 0) offenders += " and " + std::to_string(extra) + " more";
            throw DataError("division by zero on edges: " + offenders);
        }
    }
    std::vector<Fe> vals;
    vals.reserve(g.edges().size());
    for (const auto& [a, b] : g.edges()) {
        switch (op) {
            case '+': vals.push_back(ctx.add(a, b)); break;
            case '-': vals.push_back(ctx.sub(a, b)); break;
            case '*': vals.push_back(ctx.mul(a, b)); break;
            default: vals.push_back(ctx.div(a, b)); break;
        }
    }
    return sorted_unique(std::move(vals));
}

std::pair<std::vector<Fe>, std::uint64_t> partial_ratio_defined(
    const PlaneContext& ctx, const std::vector<std::pair<Fe, Fe>>& edges) {
    std::vector<Fe> vals;
    u64 skipped = 0;
    for (const auto& [a, b] : edges) {
        if (b == 0) {
            ++skipped;
        } else {
            vals.push_back(ctx.div(a, b));
        }
    }
    return {sorted_unique(std::move(vals)), skipped};
}

std::vector<Fe> difference_set(const PlaneContext& ctx, const std::vector<Fe>& A,
                               const std::vector<Fe>& B) {
    const std::vector<Fe> a = normalized_set(ctx, A, "set element out of range");
    const std::vector<Fe> b = normalized_set(ctx, B, "set element out of range");
    FPINC_REQUIRE(static_cast<u128>(a.size()) * b.size() <= 16'000'000,
                  "difference set too large to enumerate");
    std::vector<Fe> vals;
    vals.reserve(a.size() * b.size());
    for (Fe x : a) {
        for (Fe y : b) vals.push_back(ctx.sub(x, y));
    }
    return sorted_unique(std::move(vals));
}

EnergyReport mult_energy(const PlaneContext& ctx, const std::vector<Fe>& A) {
    const std::vector<Fe> a = normalized_set(ctx, A, "set element out of range");
    FPINC_REQUIRE(!a.empty(), "empty set");
    FPINC_REQUIRE(a.size() <= 4096, "set too large for exact energy");
    std::map<Fe, u64> hist;
    for (Fe x : a) {
        for (Fe y : a) ++hist[ctx.mul(x, y)];
    }
    EnergyReport out;
    out.method = "bucketed";
    for (const auto& [v, c] : hist) {
        out.energy += c * c;
        out.histogram.emplace_back(v, c);
    }
    return out;
}

EnergyReport mult_energy_brute(const PlaneContext& ctx,
                               const std::vector<Fe>& A) {
    const std::vector<Fe> a = normalized_set(ctx, A, "set element out of range");
    FPINC_REQUIRE(!a.empty(), "empty set");
    FPINC_REQUIRE(a.size() <= 12, "brute-force energy limited to 12 elements");
    EnergyReport out;
    out.method = "brute";
    for (Fe x : a) {
        for (Fe y : a) {
            for (Fe z : a) {
                for (Fe w : a) {
                    if (ctx.mul(x, y) == ctx.mul(z, w)) ++out.energy;
                }
            }
        }
    }
    std::map<Fe, u64> hist;
    for (Fe x : a) {
        for (Fe y : a) ++hist[ctx.mul(x, y)];
    }
    for (const auto& [v, c] : hist) out.histogram.emplace_back(v, c);
    return out;
}

GridReduction project_to_grid(const PlaneContext& ctx, const ProjPoint& apex1,
                              const ProjPoint& apex2, const ProjPoint& apex3,
                              const ProjPoint& apex4, const PointSet& pts) {
    FPINC_REQUIRE(pts.size() >= 1, "nothing to reduce");
    const ProjPoint a3 = canonical_proj(ctx, apex3.X, apex3.Y, apex3.Z);
    const ProjPoint a4 = canonical_proj(ctx, apex4.X, apex4.Y, apex4.Z);
    FPINC_REQUIRE(!(a3 == a4), "third and fourth apexes coincide");

    GridReduction out;
    // apex4 -> the horizontal direction, apex3 -> the vertical direction,
    // apex1 -> the origin. Lines through apex3 become vertical lines, so the
    // image x-coordinates are capped by the apex3 cover; mirror for apex4.
    out.tau = standard_frame_map(ctx, apex1, apex4, apex3);

    const ProjPoint img2 = apply_map(ctx, out.tau, apex2);
    FPINC_REQUIRE(img2.at_infinity(),
                  "second apex leaves the line through the last two");
    FPINC_REQUIRE(img2.X != 0 && img2.Y != 0,
                  "second apex coincides with an axis direction");
    const Fe mu = ctx.div(img2.X, img2.Y);
    out.applied_scale = mu;
    out.pencil_gradient = ctx.neg(mu);

    std::vector<AffinePoint> images;
    images.reserve(pts.size());
    for (const AffinePoint& q : pts.items()) {
        const ProjPoint w = apply_map(ctx, out.tau, lift(q));
        FPINC_REQUIRE(!w.at_infinity(),
                      "a point maps to infinity; strip the transversal first");
        images.push_back(AffinePoint{w.X, w.Y});
    }
    const PointSet image_set(images);
    FPINC_CHECK(image_set.size() == pts.size(),
                "projective image collapsed two points");

    std::vector<Fe> avals, bvals;
    std::vector<std::pair<Fe, Fe>> edges;
    avals.reserve(images.size());
    bvals.reserve(images.size());
    edges.reserve(images.size());
    for (const AffinePoint& q : image_set.items()) {
        avals.push_back(q.x);
        bvals.push_back(ctx.mul(mu, q.y));
        edges.emplace_back(q.x, ctx.mul(mu, q.y));
    }
    out.grid = GridInstance(ctx, avals, bvals, edges, mu);

    out.k1 = minimal_apex_cover(ctx, pts, apex1).k;
    out.k2 = minimal_apex_cover(ctx, pts, apex2).k;
    out.k3 = minimal_apex_cover(ctx, pts, apex3).k;
    out.k4 = minimal_apex_cover(ctx, pts, apex4).k;

    out.diff_count = partial_set(ctx, out.grid, '-').size();
    const auto [rset, undef] = partial_ratio_defined(ctx, out.grid.edges());
    out.ratio_count = rset.size();
    out.undefined_ratio_edges = undef;

    // Every bound is an exact equality by construction: distinct image
    // x-values are the vertical lines through the apex3 image, the scaled
    // differences enumerate the apex2 pencil, and the defined ratios are the
    // origin pencil minus the horizontal axis.
    FPINC_CHECK(out.grid.a_values().size() == out.k3,
                "vertical cover disagrees with the image x-count");
    FPINC_CHECK(out.grid.b_values().size() == out.k4,
                "horizontal cover disagrees with the image y-count");
    FPINC_CHECK(out.diff_count == out.k2,
                "pencil cover disagrees with the difference count");
    FPINC_CHECK(out.ratio_count + (undef > 0 ? 1 : 0) == out.k1,
                "origin cover disagrees with the ratio count");
    FPINC_CHECK(out.grid.edges().size() == pts.size(),
                "grid edge count disagrees with the point count");

    out.diff_le_k2 = out.diff_count <= out.k2;
    out.ratio_le_k1 = out.ratio_count <= out.k1;
    out.diff_le_k1 = out.diff_count <= out.k1;
    out.ratio_le_k2 = out.ratio_count <= out.k2;
    return out;
}

GridReduction project_to_grid(const PlaneContext& ctx, const FourApexConfig& cfg,
                              const PointSet& stripped) {
    for (const AffinePoint& q : stripped.items()) {
        FPINC_REQUIRE(cfg.core.contains(q),
                      "stripped set leaves the configuration core");
        FPINC_REQUIRE(!incident(ctx, q, cfg.transversal),
                      "strip the transversal points first");
    }
    GridReduction out =
        project_to_grid(ctx, lift(cfg.base.apex1), lift(cfg.base.apex2),
                        lift(cfg.apex3), lift(cfg.apex4), stripped);
    // The stripped set is a subset of every cover's ground set, so the
    // recomputed covers cannot exceed the stored certificates.
    FPINC_CHECK(out.k1 <= cfg.base.cover1.k && out.k2 <= cfg.base.cover2.k &&
                    out.k3 <= cfg.cover3.k && out.k4 <= cfg.cover4.k,
                "reduced covers exceed the configuration certificates");
    return out;
}

PopularSubset select_popular_subset(const PlaneContext& ctx,
                                    const GridInstance& g, double eps) {
    (void)ctx;
    FPINC_REQUIRE(eps > 0.0 && eps < 1.0, "eps outside (0, 1)");
    FPINC_REQUIRE(!g.edges().empty(), "empty edge set");
    const auto& A = g.a_values();
    const auto& B = g.b_values();
    const u64 nA = A.size();
    const u64 nB = B.size();
    const u64 m = g.edges().size();

    std::vector<std::vector<std::size_t>> candidates;
    for (Fe b : B) {
        std::vector<std::size_t> cand;
        for (std::size_t i = 0; i < nA; ++i) {
            const auto& nb = g.row_neighbors(i);
            if (std::binary_search(nb.begin(), nb.end(), b)) cand.push_back(i);
        }
        if (!cand.empty()) candidates.push_back(std::move(cand));
    }
    {
        std::vector<std::size_t> cand;
        for (std::size_t i = 0; i < nA; ++i) {
            if (static_cast<u128>(2) * nA * g.row_degree(i) >= m) cand.push_back(i);
        }
        if (!cand.empty()) candidates.push_back(std::move(cand));
    }

    bool size2_exists = false;
    for (const auto& c : candidates) size2_exists |= c.size() >= 2;

    bool found = false;
    std::vector<std::size_t> best;
    u64 best_t = 0;
    double best_fraction = 0.0;
    double best_any_fraction = 0.0;
    for (const auto& cand : candidates) {
        if (size2_exists && cand.size() < 2) continue;
        const u64 s = cand.size();
        const u64 m2 = s * s;
        const u64 needed = popular_pair_floor(eps, m2);
        std::vector<u64> codeg;
        codeg.reserve(m2);
        for (std::size_t i : cand) {
            for (std::size_t j : cand) {
                codeg.push_back(
                    intersect_count(g.row_neighbors(i), g.row_neighbors(j)));
            }
        }
        std::sort(codeg.begin(), codeg.end(), std::greater<u64>());
        u64 positive = 0;
        for (u64 c : codeg) positive += c >= 1;
        best_any_fraction = std::max(
            best_any_fraction, static_cast<double>(positive) / static_cast<double>(m2));
        const u64 t = codeg[needed - 1];
        if (t == 0) continue;
        u64 at_least = 0;
        for (u64 c : codeg) at_least += c >= t;
        const bool better =
            !found || s > best.size() || (s == best.size() && t > best_t);
        if (better) {
            found = true;
            best = cand;
            best_t = t;
            best_fraction =
                static_cast<double>(at_least) / static_cast<double>(m2);
        }
    }
    if (!found) {
        throw DataError(
            "no candidate reaches the popular pair fraction; best fraction " +
            format_double(best_any_fraction) +
            " across candidates with at least two rows");
    }

    PopularSubset out;
    out.selected.reserve(best.size());
    for (std::size_t i : best) out.selected.push_back(A[i]);
    out.threshold = best_t;
    out.pair_fraction = best_fraction;
    out.codegree_ratio = static_cast<double>(best_t) *
                         std::pow(static_cast<double>(nA), 2.0) *
                         static_cast<double>(nB) /
                         std::pow(static_cast<double>(m), 2.0);
    out.size_ratio = static_cast<double>(out.selected.size()) *
                     static_cast<double>(nB) / static_cast<double>(m);
    return out;
}

RefinedGraph build_refined_graph(const PlaneContext& ctx, const GridInstance& g,
                                 double eps) {
    RefinedGraph out;
    out.subset = select_popular_subset(ctx, g, eps);
    const auto& A = g.a_values();
    std::vector<std::size_t> rows;
    rows.reserve(out.subset.selected.size());
    for (Fe v : out.subset.selected) {
        rows.push_back(static_cast<std::size_t>(
            std::lower_bound(A.begin(), A.end(), v) - A.begin()));
    }
    const u64 s = rows.size();
    const u64 needed = popular_pair_floor(eps, s * s);
    std::vector<Fe> diffs, ratios;
    for (std::size_t i : rows) {
        for (std::size_t j : rows) {
            if (intersect_count(g.row_neighbors(i), g.row_neighbors(j)) <
                out.subset.threshold) {
                continue;
            }
            out.pairs.emplace_back(A[i], A[j]);
            diffs.push_back(ctx.sub(A[i], A[j]));
            if (A[j] == 0) {
                ++out.undefined_ratio_edges;
            } else {
                ratios.push_back(ctx.div(A[i], A[j]));
            }
        }
    }
    FPINC_CHECK(out.pairs.size() >= needed,
                "codegree graph thinner than its selection floor");
    out.diff_set = sorted_unique(std::move(diffs));
    out.ratio_set = sorted_unique(std::move(ratios));

    const u64 dG = partial_set(ctx, g, '-').size();
    const auto [rsetG, skipG] = partial_ratio_defined(ctx, g.edges());
    (void)skipG;
    const double m = static_cast<double>(g.edges().size());
    const double denom_common = std::pow(static_cast<double>(A.size()), 2.0) *
                                static_cast<double>(g.b_values().size());
    if (dG > 0) {
        out.diff_ratio = static_cast<double>(out.diff_set.size()) * m * m /
                         (std::pow(static_cast<double>(dG), 2.0) * denom_common);
    }
    if (!rsetG.empty()) {
        out.ratio_ratio =
            static_cast<double>(out.ratio_set.size()) * m * m /
            (std::pow(static_cast<double>(rsetG.size()), 2.0) * denom_common);
    }
    return out;
}

RegularizedDiff regularize_diff(const PlaneContext& ctx, const std::vector<Fe>& A,
                                const std::vector<Fe>& B, const std::vector<Fe>& C,
                                const std::vector<std::pair<Fe, Fe>>& G,
                                const std::vector<std::pair<Fe, Fe>>& H,
                                double eps) {
    FPINC_REQUIRE(eps > 0.0 && eps < 0.25, "eps outside (0, 1/4)");
    const std::vector<Fe> a = normalized_set(ctx, A, "set element out of range");
    const std::vector<Fe> b = normalized_set(ctx, B, "set element out of range");
    const std::vector<Fe> c = normalized_set(ctx, C, "set element out of range");
    const auto gg =
        normalized_edges(G, a, b, "edge endpoint missing from its side");
    const auto hh =
        normalized_edges(H, b, c, "edge endpoint missing from its side");

    const long double gfloor = (1.0L - static_cast<long double>(eps)) *
                               static_cast<long double>(a.size()) *
                               static_cast<long double>(b.size());
    const long double hfloor = (1.0L - static_cast<long double>(eps)) *
                               static_cast<long double>(b.size()) *
                               static_cast<long double>(c.size());
    FPINC_REQUIRE(static_cast<long double>(gg.size()) + 1e-9L >= gfloor,
                  "graph below the density floor");
    FPINC_REQUIRE(static_cast<long double>(hh.size()) + 1e-9L >= hfloor,
                  "graph below the density floor");

    const long double thr =
        (1.0L - std::sqrt(static_cast<long double>(eps))) *
        static_cast<long double>(b.size());

    std::map<Fe, u64> gdeg;
    for (const auto& [x, y] : gg) {
        (void)y;
        ++gdeg[x];
    }
    std::map<Fe, u64> hdeg;
    for (const auto& [x, y] : hh) {
        (void)x;
        ++hdeg[y];
    }

    RegularizedDiff out;
    for (Fe x : a) {
        const auto it = gdeg.find(x);
        const u64 d = it == gdeg.end() ? 0 : it->second;
        if (static_cast<long double>(d) + 1e-9L >= thr) out.rows.push_back(x);
    }
    for (Fe z : c) {
        const auto it = hdeg.find(z);
        const u64 d = it == hdeg.end() ? 0 : it->second;
        if (static_cast<long double>(d) + 1e-9L >= thr) out.cols.push_back(z);
    }
    const long double side =
        1.0L - std::sqrt(static_cast<long double>(eps));
    FPINC_CHECK(static_cast<long double>(out.rows.size()) + 1e-9L >=
                    side * static_cast<long double>(a.size()),
                "regularized row floor violated");
    FPINC_CHECK(static_cast<long double>(out.cols.size()) + 1e-9L >=
                    side * static_cast<long double>(c.size()),
                "regularized column floor violated");

    out.diff = difference_set(ctx, out.rows, out.cols);
    const u64 dG = distinct_diffs(ctx, gg);
    const u64 dH = distinct_diffs(ctx, hh);
    if (dG > 0 && dH > 0) {
        out.bound_ratio = static_cast<double>(out.diff.size()) *
                          static_cast<double>(b.size()) /
                          (static_cast<double>(dG) * static_cast<double>(dH));
    }
    return out;
}

DenseDiff dense_diff_refine(const PlaneContext& ctx, const std::vector<Fe>& A,
                            const std::vector<std::pair<Fe, Fe>>& G, double eps) {
    const std::vector<Fe> a = normalized_set(ctx, A, "set element out of range");
    const RegularizedDiff reg = regularize_diff(ctx, a, a, a, G, G, eps);
    DenseDiff out;
    std::set_intersection(reg.rows.begin(), reg.rows.end(), reg.cols.begin(),
                          reg.cols.end(), std::back_inserter(out.kept));
    const long double floor2 =
        (1.0L - 2.0L * std::sqrt(static_cast<long double>(eps))) *
        static_cast<long double>(a.size());
    FPINC_CHECK(static_cast<long double>(out.kept.size()) + 1e-9L >= floor2,
                "dense core floor violated");
    out.diff = difference_set(ctx, out.kept, out.kept);
    const u64 dG = distinct_diffs(ctx, normalized_edges(G, a, a,
                                                        "edge endpoint missing from its side"));
    if (dG > 0) {
        out.bound_ratio = static_cast<double>(out.diff.size()) *
                          static_cast<double>(a.size()) /
                          std::pow(static_cast<double>(dG), 2.0);
    }
    return out;
}

HalfBsgResult half_bsg(const PlaneContext& ctx, const GridInstance& g,
                       double eps) {
    FPINC_REQUIRE(eps > 0.0 && eps < 0.0625, "eps outside (0, 1/16)");
    FPINC_REQUIRE(!g.edges().empty(), "empty edge set");
    HalfBsgResult out;
    out.graph = build_refined_graph(ctx, g, eps);

    out.core.clear();
    const DenseDiff dd =
        dense_diff_refine(ctx, out.graph.subset.selected, out.graph.pairs, eps);
    out.core = dd.kept;
    out.core_diff = dd.diff;

    std::vector<Fe> ratios;
    for (const auto& [x, y] : out.graph.pairs) {
        if (!std::binary_search(out.core.begin(), out.core.end(), x) ||
            !std::binary_search(out.core.begin(), out.core.end(), y)) {
            continue;
        }
        out.core_pairs.emplace_back(x, y);
        if (y == 0) {
            ++out.undefined_core_ratio_edges;
        } else {
            ratios.push_back(ctx.div(x, y));
        }
    }
    // eps < 1/16 forces |core|^2 > |A'|^2/4 and H misses under eps|A'|^2
    // pairs, so the restricted graph cannot empty out.
    FPINC_CHECK(!out.core_pairs.empty(), "core graph emptied out");
    FPINC_REQUIRE(!ratios.empty(), "partial ratio set undefined on every pair");
    out.core_ratio = sorted_unique(std::move(ratios));

    out.energy = mult_energy(ctx, out.core);
    const u64 defined_pairs =
        out.core_pairs.size() - out.undefined_core_ratio_edges;
    FPINC_CHECK(static_cast<u128>(out.energy.energy) * out.core_ratio.size() >=
                    static_cast<u128>(defined_pairs) * defined_pairs,
                "energy fell below the pairing floor");

    const u64 dG = partial_set(ctx, g, '-').size();
    const auto [rsetG, skipG] = partial_ratio_defined(ctx, g.edges());
    (void)skipG;
    const double m = static_cast<double>(g.edges().size());
    const double na = static_cast<double>(g.a_values().size());
    const double nb = static_cast<double>(g.b_values().size());
    if (dG > 0) {
        out.diff_ceiling_ratio = static_cast<double>(out.core_diff.size()) *
                                 std::pow(m, 5.0) /
                                 (std::pow(static_cast<double>(dG), 4.0) *
                                  std::pow(na, 4.0) * std::pow(nb, 3.0));
    }
    if (!rsetG.empty()) {
        out.energy_floor_ratio =
            static_cast<double>(out.energy.energy) * std::pow(nb, 5.0) *
            std::pow(na, 2.0) *
            std::pow(static_cast<double>(rsetG.size()), 2.0) / std::pow(m, 6.0);
    }
    return out;
}

RudnevReport check_rudnev(const PlaneContext& ctx, const std::vector<Fe>& A) {
    const std::vector<Fe> a = normalized_set(ctx, A, "set element out of range");
    FPINC_REQUIRE(!a.empty(), "empty set");
    RudnevReport out;
    out.set_size = a.size();
    out.energy = mult_energy(ctx, a).energy;
    out.diff_size = difference_set(ctx, a, a).size();
    out.size_warning =
        static_cast<u128>(a.size()) * a.size() >= static_cast<u128>(ctx.p());

    const cpp_int num = boost::multiprecision::pow(cpp_int(out.energy), 4);
    const cpp_int den =
        boost::multiprecision::pow(cpp_int(out.diff_size), 7) *
        boost::multiprecision::pow(cpp_int(out.set_size), 4);
    const cpp_rational ratio(num, den);
    out.numerator = boost::multiprecision::numerator(ratio).str();
    out.denominator = boost::multiprecision::denominator(ratio).str();
    out.ratio = ratio.convert_to<double>();
    out.positive_finite = num > 0 && den > 0;
    return out;
}

PartialSumprodReport check_partial_sumprod(const PlaneContext& ctx,
                                           const GridInstance& g) {
    FPINC_REQUIRE(!g.edges().empty(), "empty edge set");
    PartialSumprodReport out;
    out.edge_count = g.edges().size();
    out.a_size = g.a_values().size();
    out.b_size = g.b_values().size();
    out.diff_count = partial_set(ctx, g, '-').size();
    const auto [rset, undef] = partial_ratio_defined(ctx, g.edges());
    FPINC_REQUIRE(!rset.empty(), "ratio set undefined on every edge");
    out.ratio_count = rset.size();
    out.undefined_ratio_edges = undef;
    out.grid_warning = static_cast<u128>(out.edge_count) >
                       static_cast<u128>(ctx.p()) * out.b_size;

    const cpp_int num = boost::multiprecision::pow(cpp_int(out.edge_count), 55);
    const cpp_int den = boost::multiprecision::pow(cpp_int(out.a_size), 36) *
                        boost::multiprecision::pow(cpp_int(out.b_size), 37) *
                        boost::multiprecision::pow(cpp_int(out.diff_count), 28) *
                        boost::multiprecision::pow(cpp_int(out.ratio_count), 8);
    const cpp_rational ratio(num, den);
    out.numerator = boost::multiprecision::numerator(ratio).str();
    out.denominator = boost::multiprecision::denominator(ratio).str();
    out.ratio = ratio.convert_to<double>();
    out.positive_finite = num > 0 && den > 0;
    return out;
}

} // namespace fpinc

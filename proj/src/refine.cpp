#include "fpinc/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fpinc/errors.hpp"

namespace fpinc {

namespace {

using u64 = std::uint64_t;
using u32 = std::uint32_t;
using u128 = unsigned __int128;

// Point-major and line-major incidence lists over index space. Both sides
// come out sorted because points are scanned in set order.
struct Buckets {
    std::vector<std::vector<u32>> point_lines;
    std::vector<std::vector<u32>> line_points;
};

Buckets build_buckets(const PlaneContext& ctx, const PointSet& P,
                      const LineSet& L) {
    const auto& pts = P.items();
    const auto& lns = L.items();
    Buckets b;
    b.point_lines.resize(pts.size());
    b.line_points.resize(lns.size());
    std::map<Fe, std::vector<std::pair<Fe, u32>>> cols;
    for (u32 i = 0; i < pts.size(); ++i) {
        cols[pts[i].x].emplace_back(pts[i].y, i);
    }
    for (u32 j = 0; j < lns.size(); ++j) {
        const AffLine& l = lns[j];
        if (l.b == 0) {
            // Canonical vertical line x = c: the whole column is incident.
            auto it = cols.find(l.c);
            if (it == cols.end()) continue;
            for (const auto& [y, i] : it->second) {
                b.point_lines[i].push_back(j);
                b.line_points[j].push_back(i);
            }
        } else {
            const Fe binv = ctx.inv(l.b);
            for (const auto& [x, col] : cols) {
                const Fe y = ctx.mul(binv, ctx.sub(l.c, ctx.mul(l.a, x)));
                auto it = std::lower_bound(col.begin(), col.end(),
                                           std::make_pair(y, u32{0}));
                if (it != col.end() && it->first == y) {
                    b.point_lines[it->second].push_back(j);
                    b.line_points[j].push_back(it->second);
                }
            }
        }
    }
    return b;
}

// |P_p| for every point, one stamped union pass per point.
std::vector<u64> cover_sizes(const Buckets& b) {
    const u32 n = static_cast<u32>(b.point_lines.size());
    std::vector<u64> out(n, 0);
    std::vector<u32> stamp(n, UINT32_MAX);
    for (u32 i = 0; i < n; ++i) {
        u64 c = 0;
        for (u32 j : b.point_lines[i]) {
            for (u32 q : b.line_points[j]) {
                if (stamp[q] != i) {
                    stamp[q] = i;
                    ++c;
                }
            }
        }
        // The pass counts i itself whenever i lies on any line.
        if (c > 0) --c;
        out[i] = c;
    }
    return out;
}

std::vector<u32> cover_of(const Buckets& b, u32 i) {
    std::vector<u32> out;
    for (u32 j : b.point_lines[i]) {
        out.insert(out.end(), b.line_points[j].begin(), b.line_points[j].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    auto self = std::lower_bound(out.begin(), out.end(), i);
    if (self != out.end() && *self == i) out.erase(self);
    return out;
}

std::vector<u32> sorted_intersection(const std::vector<u32>& a,
                                     const std::vector<u32>& b) {
    std::vector<u32> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
}

void require_degree_class(const IncidenceProfile& pr, u64 K) {
    FPINC_REQUIRE(K >= 1, "degree class level must be positive");
    for (u64 d : pr.point_degree) {
        FPINC_REQUIRE(d >= K && d < 2 * K,
                      "point degree falls outside the dyadic class");
    }
}

void check_lines_in(const LineSet& sub, const LineSet& ambient) {
    for (const AffLine& l : sub.items()) {
        FPINC_CHECK(ambient.contains(l),
                    "supporting lines leave the ambient line set");
    }
}

} // namespace

PointSet refine_popular_points(const PlaneContext& ctx, const PointSet& P,
                               const LineSet& L) {
    const IncidenceProfile pr = count_incidences(ctx, P, L);
    FPINC_REQUIRE(pr.total > 0, "no incidences to refine");
    const u64 I = pr.total;
    const u64 n = P.size();
    std::vector<AffinePoint> kept;
    u64 kept_inc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const u64 d = pr.point_degree[i];
        if (static_cast<u128>(2) * n * d >= I) {
            kept.push_back(P.items()[i]);
            kept_inc += d;
        }
    }
    // Dropping points leaves the survivors' degrees intact, so the kept
    // degree sum is I(P1, L) exactly.
    FPINC_CHECK(2 * kept_inc >= I,
                "popularity refinement lost more than half the incidences");
    return PointSet(kept);
}

LineSet refine_popular_lines(const PlaneContext& ctx, const PointSet& P,
                             const LineSet& L) {
    const IncidenceProfile pr = count_incidences(ctx, P, L);
    FPINC_REQUIRE(pr.total > 0, "no incidences to refine");
    const u64 I = pr.total;
    const u64 m = L.size();
    std::vector<AffLine> kept;
    u64 kept_inc = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const u64 r = pr.line_richness[j];
        if (static_cast<u128>(2) * m * r >= I) {
            kept.push_back(L.items()[j]);
            kept_inc += r;
        }
    }
    FPINC_CHECK(2 * kept_inc >= I,
                "popularity refinement lost more than half the incidences");
    return LineSet(kept);
}

PointSet refine_bounded_points(const PlaneContext& ctx, const PointSet& P,
                               const LineSet& L) {
    const IncidenceProfile pr = count_incidences(ctx, P, L);
    FPINC_REQUIRE(pr.total > 0, "no incidences to refine");
    const u64 I = pr.total;
    const u64 m = L.size();
    std::vector<AffinePoint> kept;
    u64 kept_inc = 0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const u64 d = pr.point_degree[i];
        // d <= max{4, 4|L|^2/I} without rounding.
        if (d <= 4 || static_cast<u128>(d) * I <= static_cast<u128>(4) * m * m) {
            kept.push_back(P.items()[i]);
            kept_inc += d;
        }
    }
    FPINC_CHECK(2 * kept_inc >= I,
                "boundedness refinement lost more than half the incidences");
    return PointSet(kept);
}

LineSet refine_bounded_lines(const PlaneContext& ctx, const PointSet& P,
                             const LineSet& L) {
    const IncidenceProfile pr = count_incidences(ctx, P, L);
    FPINC_REQUIRE(pr.total > 0, "no incidences to refine");
    const u64 I = pr.total;
    const u64 n = P.size();
    std::vector<AffLine> kept;
    u64 kept_inc = 0;
    for (std::size_t j = 0; j < L.size(); ++j) {
        const u64 r = pr.line_richness[j];
        if (r <= 4 || static_cast<u128>(r) * I <= static_cast<u128>(4) * n * n) {
            kept.push_back(L.items()[j]);
            kept_inc += r;
        }
    }
    FPINC_CHECK(2 * kept_inc >= I,
                "boundedness refinement lost more than half the incidences");
    return LineSet(kept);
}

PointSet cover_set(const PlaneContext& ctx, const PointSet& P, const LineSet& L,
                   const AffinePoint& p) {
    FPINC_REQUIRE(P.contains(p), "apex point is not a member of the set");
    std::vector<AffinePoint> out;
    for (const AffinePoint& q : P.items()) {
        if (q == p) continue;
        if (L.contains(line_through(ctx, p, q))) out.push_back(q);
    }
    return PointSet(out);
}

CoverBase find_popular_cover_base(const PlaneContext& ctx, const PointSet& P,
                                  const LineSet& L, std::uint64_t K) {
    const IncidenceProfile pr = count_incidences(ctx, P, L);
    require_degree_class(pr, K);
    const LineSet L1 = refine_popular_lines(ctx, P, L);
    const PointSet P1 = refine_popular_points(ctx, P, L1);
    // Cover sets stay relative to the full (P, L) pair.
    const Buckets b = build_buckets(ctx, P, L);
    const std::vector<u64> sizes = cover_sizes(b);
    u64 t = UINT64_MAX;
    for (const AffinePoint& q : P1.items()) {
        const std::size_t idx = P.index_of(q);
        t = std::min(t, sizes[idx]);
    }
    CoverBase out;
    out.base = P1;
    out.min_cover = t;
    out.ratio = static_cast<double>(t) * static_cast<double>(L.size()) /
                (std::pow(static_cast<double>(K), 2.0) *
                 static_cast<double>(P.size()));
    return out;
}

ApexCover minimal_apex_cover(const PlaneContext& ctx, const PointSet& S,
                             const ProjPoint& apex) {
    const ProjPoint a = canonical_proj(ctx, apex.X, apex.Y, apex.Z);
    if (!a.at_infinity()) {
        FPINC_REQUIRE(!S.contains(to_affine(ctx, a)),
                      "apex belongs to the covered set");
    }
    std::vector<AffLine> ls;
    ls.reserve(S.size());
    for (const AffinePoint& q : S.items()) {
        ls.push_back(line_through_apex(ctx, a, q));
    }
    ApexCover out;
    out.apex = a;
    out.lines = LineSet(ls);
    out.k = out.lines.size();
    out.covered = S;
    return out;
}

ApexCover minimal_apex_cover(const PlaneContext& ctx, const PointSet& S,
                             const AffinePoint& apex) {
    return minimal_apex_cover(ctx, S, lift(apex));
}

TwoApexConfig find_two_apex_config(const PlaneContext& ctx, const PointSet& P,
                                   const LineSet& L, std::uint64_t K) {
    FPINC_REQUIRE(P.size() >= 2, "need at least two points");
    const IncidenceProfile pr = count_incidences(ctx, P, L);
    require_degree_class(pr, K);
    const auto& pts = P.items();
    const u32 n = static_cast<u32>(pts.size());

    const Buckets b = build_buckets(ctx, P, L);
    const std::vector<u64> sizes = cover_sizes(b);
    u32 i1 = 0;
    for (u32 i = 1; i < n; ++i) {
        if (sizes[i] > sizes[i1]) i1 = i;
    }
    FPINC_REQUIRE(sizes[i1] >= 2, kErrNoCoverCandidate);

    const std::vector<u32> cov1 = cover_of(b, i1);
    std::vector<char> mark(n, 0);
    for (u32 q : cov1) mark[q] = 1;

    // For each candidate q in P_{p1}, count |P_{p1} ∩ P_q| with one stamped
    // sweep over q's lines. p1 itself is never marked, q skips itself.
    std::vector<u32> stamp(n, UINT32_MAX);
    u64 best_cnt = 0;
    u32 i2 = cov1.front();
    for (u32 q : cov1) {
        u64 cnt = 0;
        for (u32 j : b.point_lines[q]) {
            for (u32 r : b.line_points[j]) {
                if (stamp[r] != q) {
                    stamp[r] = q;
                    if (mark[r] && r != q) ++cnt;
                }
            }
        }
        if (cnt > best_cnt) {
            best_cnt = cnt;
            i2 = q;
        }
    }

    const std::vector<u32> cov2 = cover_of(b, i2);
    const std::vector<u32> qidx = sorted_intersection(cov1, cov2);
    std::vector<AffinePoint> qpts;
    qpts.reserve(qidx.size());
    for (u32 i : qidx) qpts.push_back(pts[i]);

    TwoApexConfig out;
    out.apex1 = pts[i1];
    out.apex2 = pts[i2];
    out.core = PointSet(qpts);
    out.cover1 = minimal_apex_cover(ctx, out.core, out.apex1);
    out.cover2 = minimal_apex_cover(ctx, out.core, out.apex2);
    // Core points sit in both cover sets, so the joining lines lie in L and
    // are a subset of the (< 2K) L-lines through each apex.
    FPINC_CHECK(out.cover1.k < 2 * K && out.cover2.k < 2 * K,
                "cover certificate exceeds the degree class cap");
    check_lines_in(out.cover1.lines, L);
    check_lines_in(out.cover2.lines, L);
    out.size_ratio = static_cast<double>(out.core.size()) *
                     std::pow(static_cast<double>(L.size()), 2.0) /
                     (std::pow(static_cast<double>(K), 4.0) *
                      static_cast<double>(P.size()));
    return out;
}

FourApexConfig find_four_apex_config(const PlaneContext& ctx,
                                     const TwoApexConfig& cfg, const PointSet& P,
                                     const LineSet& L, std::uint64_t K) {
    FPINC_REQUIRE(K >= 1, "degree class level must be positive");
    const PointSet& Q = cfg.core;
    FourApexConfig out;
    out.base = cfg;
    out.per_line_cap = static_cast<double>(P.size()) / static_cast<double>(K);

    out.max_line_load = 0;
    LineSet support(
        [&] {
            std::vector<AffLine> ls = cfg.cover1.lines.items();
            const auto& more = cfg.cover2.lines.items();
            ls.insert(ls.end(), more.begin(), more.end());
            return ls;
        }());
    for (const AffLine& l : support.items()) {
        u64 load = 0;
        for (const AffinePoint& q : Q.items()) {
            if (incident(ctx, q, l)) ++load;
        }
        out.max_line_load = std::max(out.max_line_load, load);
    }
    // load <= |P|/K, compared without rounding.
    out.cap_respected =
        static_cast<u128>(out.max_line_load) * K <= static_cast<u128>(P.size());

    const CoverBase cb = find_popular_cover_base(ctx, Q, L, K);
    const ApexCover coverQ1 = minimal_apex_cover(ctx, cb.base, cfg.apex2);
    check_lines_in(coverQ1.lines, L);
    const LineSet J1 = refine_popular_lines(ctx, cb.base, coverQ1.lines);

    bool any_avoids = false;
    u64 best_on = 0;
    AffLine lstar{};
    for (const AffLine& l : J1.items()) {
        if (incident(ctx, cfg.apex1, l)) continue;
        any_avoids = true;
        u64 on = 0;
        for (const AffinePoint& q : Q.items()) {
            if (incident(ctx, q, l)) ++on;
        }
        if (on > best_on) {
            best_on = on;
            lstar = l;
        }
    }
    FPINC_REQUIRE(any_avoids, kErrNoTransversal);
    FPINC_REQUIRE(best_on >= 2, kErrEmptyCore);

    std::vector<AffinePoint> on_line;
    for (const AffinePoint& q : Q.items()) {
        if (incident(ctx, q, lstar)) on_line.push_back(q);
    }
    out.transversal = lstar;
    out.transversal_points = on_line.size();

    // Cover sets relative to (Q, L) for the pair scan.
    const Buckets bq = build_buckets(ctx, Q, L);
    std::vector<std::vector<u32>> covs(on_line.size());
    for (std::size_t s = 0; s < on_line.size(); ++s) {
        covs[s] = cover_of(bq, static_cast<u32>(Q.index_of(on_line[s])));
        out.diagonal_sum += covs[s].size();
    }
    u64 best_overlap = 0;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i + 1 < on_line.size(); ++i) {
        for (std::size_t j = i + 1; j < on_line.size(); ++j) {
            std::vector<u32> inter = sorted_intersection(covs[i], covs[j]);
            out.offdiagonal_sum += 2 * inter.size();
            if (inter.size() > best_overlap) {
                best_overlap = inter.size();
                bi = i;
                bj = j;
            }
        }
    }
    FPINC_REQUIRE(best_overlap >= 1, kErrEmptyCore);
    out.offdiagonal_dominates = out.offdiagonal_sum > out.diagonal_sum;

    const std::vector<u32> ridx = sorted_intersection(covs[bi], covs[bj]);
    std::vector<AffinePoint> rpts;
    rpts.reserve(ridx.size());
    for (u32 i : ridx) rpts.push_back(Q.items()[i]);

    out.apex3 = on_line[bi];
    out.apex4 = on_line[bj];
    out.core = PointSet(rpts);
    out.cover3 = minimal_apex_cover(ctx, out.core, out.apex3);
    out.cover4 = minimal_apex_cover(ctx, out.core, out.apex4);
    FPINC_CHECK(out.cover3.k < 2 * K && out.cover4.k < 2 * K,
                "cover certificate exceeds the degree class cap");
    check_lines_in(out.cover3.lines, L);
    check_lines_in(out.cover4.lines, L);

    FPINC_CHECK(L.contains(lstar), "transversal left the ambient line set");
    FPINC_CHECK(incident(ctx, cfg.apex2, lstar) &&
                    incident(ctx, out.apex3, lstar) &&
                    incident(ctx, out.apex4, lstar),
                "transversal misses one of its defining points");
    FPINC_CHECK(!incident(ctx, cfg.apex1, lstar),
                "transversal passes through the first apex");
    FPINC_CHECK(!(out.apex3 == out.apex4), "pair scan returned equal apexes");

    out.size_ratio = static_cast<double>(out.core.size()) *
                     std::pow(static_cast<double>(L.size()), 4.0) /
                     (std::pow(static_cast<double>(K), 8.0) *
                      static_cast<double>(P.size()));
    return out;
}

} // namespace fpinc

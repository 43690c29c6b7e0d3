#include "fpinc/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fpinc {

PointSet::PointSet(std::vector<AffinePoint> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

bool PointSet::contains(const AffinePoint& p) const {
    return std::binary_search(pts_.begin(), pts_.end(), p);
}

std::size_t PointSet::index_of(const AffinePoint& p) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
    if (it == pts_.end() || *it != p) return pts_.size();
    return static_cast<std::size_t>(it - pts_.begin());
}

LineSet::LineSet(std::vector<AffLine> lines) : lines_(std::move(lines)) {
    std::sort(lines_.begin(), lines_.end());
    lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());
}

bool LineSet::contains(const AffLine& l) const {
    return std::binary_search(lines_.begin(), lines_.end(), l);
}

std::size_t LineSet::index_of(const AffLine& l) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), l);
    if (it == lines_.end() || *it != l) return lines_.size();
    return static_cast<std::size_t>(it - lines_.begin());
}

namespace {

// Trivial (Cauchy-Schwarz) incidence bounds hold for every P, L; checked in
// exact integer arithmetic, so a failure means the counter itself is broken.
void check_trivial_bounds(const IncidenceProfile& prof, std::uint64_t np,
                          std::uint64_t nl) {
    using u128 = unsigned __int128;
    std::uint64_t I = prof.total;
    bool ok1 = I <= nl || static_cast<u128>(I - nl) * (I - nl) <= static_cast<u128>(np) * np * nl;
    bool ok2 = I <= np || static_cast<u128>(I - np) * (I - np) <= static_cast<u128>(nl) * nl * np;
    FPINC_CHECK(ok1 && ok2, "incidence count exceeds the trivial bound");
}

void check_profile(const IncidenceProfile& prof) {
    std::uint64_t sd = 0, sr = 0;
    for (auto d : prof.point_degree) sd += d;
    for (auto r : prof.line_richness) sr += r;
    FPINC_CHECK(sd == prof.total && sr == prof.total,
                "incidence profile sides disagree");
}

} // namespace

IncidenceProfile count_incidences_naive(const PlaneContext& ctx, const PointSet& P,
                                        const LineSet& L) {
    IncidenceProfile prof;
    prof.point_degree.assign(P.size(), 0);
    prof.line_richness.assign(L.size(), 0);
    for (std::size_t i = 0; i < P.size(); ++i) {
        for (std::size_t j = 0; j < L.size(); ++j) {
            if (incident(ctx, P[i], L[j])) {
                ++prof.point_degree[i];
                ++prof.line_richness[j];
                ++prof.total;
            }
        }
    }
    check_profile(prof);
    check_trivial_bounds(prof, P.size(), L.size());
    return prof;
}

IncidenceProfile count_incidences(const PlaneContext& ctx, const PointSet& P,
                                  const LineSet& L) {
    IncidenceProfile prof;
    prof.point_degree.assign(P.size(), 0);
    prof.line_richness.assign(L.size(), 0);

    // Column index: distinct x -> sorted y list with original positions.
    std::map<Fe, std::vector<std::pair<Fe, std::size_t>>> cols;
    for (std::size_t i = 0; i < P.size(); ++i)
        cols[P[i].x].push_back({P[i].y, i});

    auto hit = [&](std::vector<std::pair<Fe, std::size_t>>& col, Fe y,
                   std::size_t line_idx) {
        auto it = std::lower_bound(col.begin(), col.end(),
                                   std::pair<Fe, std::size_t>{y, 0});
        if (it != col.end() && it->first == y) {
            ++prof.point_degree[it->second];
            ++prof.line_richness[line_idx];
            ++prof.total;
        }
    };

    for (std::size_t j = 0; j < L.size(); ++j) {
        const AffLine& l = L[j];
        if (l.b == 0) {
            // Canonical vertical: x = c (a = 1). Whole column is incident.
            auto it = cols.find(l.c);
            if (it == cols.end()) continue;
            for (auto& [y, idx] : it->second) {
                (void)y;
                ++prof.point_degree[idx];
                ++prof.line_richness[j];
                ++prof.total;
            }
        } else {
            Fe binv = ctx.inv(l.b);
            for (auto& [x, col] : cols) {
                Fe y = ctx.mul(binv, ctx.sub(l.c, ctx.mul(l.a, x)));
                hit(col, y, j);
            }
        }
    }
    check_profile(prof);
    check_trivial_bounds(prof, P.size(), L.size());
    return prof;
}

LineSet lines_determined(const PlaneContext& ctx, const PointSet& P) {
    FPINC_REQUIRE(P.size() >= 2, "need at least two points to determine lines");
    std::vector<AffLine> out;
    out.reserve(P.size() * (P.size() - 1) / 2);
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = i + 1; j < P.size(); ++j)
            out.push_back(line_through(ctx, P[i], P[j]));
    return LineSet(std::move(out));
}

std::pair<AffLine, std::uint64_t> max_collinear(const PlaneContext& ctx,
                                                const PointSet& P) {
    FPINC_REQUIRE(P.size() >= 2, "need at least two points");
    LineSet det = lines_determined(ctx, P);
    IncidenceProfile prof = count_incidences(ctx, P, det);
    std::size_t best = 0;
    for (std::size_t j = 1; j < det.size(); ++j)
        if (prof.line_richness[j] > prof.line_richness[best]) best = j;
    // Lines are already in canonical order, so the first maximum wins ties.
    return {det[best], prof.line_richness[best]};
}

namespace {

// Shared class scan: values v >= 1 fall into class floor(log2 v). Returns the
// level 2^j maximizing weight(count_j, 2^j), smaller level on ties.
template <typename WeightFn>
std::uint64_t best_dyadic_level(const std::vector<std::uint64_t>& values,
                                WeightFn weight) {
    std::map<std::uint64_t, std::uint64_t> class_count;
    for (auto v : values) {
        if (v == 0) continue;
        std::uint64_t lvl = std::uint64_t{1} << (63 - __builtin_clzll(v));
        ++class_count[lvl];
    }
    FPINC_CHECK(!class_count.empty(), "dyadic scan saw only zero values");
    std::uint64_t best_lvl = 0, best_w = 0;
    for (auto& [lvl, cnt] : class_count) {
        std::uint64_t w = weight(cnt, lvl);
        if (best_lvl == 0 || w > best_w) {
            best_lvl = lvl;
            best_w = w;
        }
    }
    return best_lvl;
}

std::uint64_t ceil_log2_2n(std::uint64_t n) {
    // ceil(log2(2n)) for n >= 1.
    std::uint64_t v = 2 * n, r = 0;
    while ((std::uint64_t{1} << r) < v) ++r;
    return r;
}

} // namespace

DyadicPointClass dyadic_select_points(const PlaneContext& ctx, const PointSet& P,
                                      const LineSet& L) {
    IncidenceProfile prof = count_incidences(ctx, P, L);
    FPINC_REQUIRE(prof.total > 0, "no incidences to pigeonhole");

    std::uint64_t lvl = best_dyadic_level(
        prof.point_degree,
        [](std::uint64_t cnt, std::uint64_t l) { return cnt * l; });

    std::vector<AffinePoint> sel;
    for (std::size_t i = 0; i < P.size(); ++i) {
        std::uint64_t d = prof.point_degree[i];
        if (d >= lvl && d < 2 * lvl) sel.push_back(P[i]);
    }
    DyadicPointClass out;
    out.selected = PointSet(std::move(sel));
    out.level = lvl;
    out.mass = out.selected.size() * lvl;
    out.realized_factor = static_cast<double>(prof.total) / static_cast<double>(out.mass);
    // Provable pigeonhole floor: I <= 2 * ceil(log2(2|L|)) * mass.
    FPINC_CHECK(prof.total <= 2 * ceil_log2_2n(L.size()) * out.mass,
                "dyadic point mass below the pigeonhole floor");
    return out;
}

DyadicLineClass dyadic_select_lines(const PlaneContext& ctx, const PointSet& P,
                                    const LineSet& L) {
    IncidenceProfile prof = count_incidences(ctx, P, L);
    FPINC_REQUIRE(prof.total > 0, "no incidences to pigeonhole");

    std::uint64_t lvl = best_dyadic_level(
        prof.line_richness,
        [](std::uint64_t cnt, std::uint64_t l) { return cnt * l * l; });

    std::vector<AffLine> sel;
    std::uint64_t sum_sq = 0;
    for (std::size_t j = 0; j < L.size(); ++j) {
        std::uint64_t r = prof.line_richness[j];
        sum_sq += r * r;
        if (r >= lvl && r < 2 * lvl) sel.push_back(L[j]);
    }
    DyadicLineClass out;
    out.selected = LineSet(std::move(sel));
    out.level = lvl;
    out.mass = out.selected.size() * lvl * lvl;
    out.realized_factor = static_cast<double>(sum_sq) / static_cast<double>(out.mass);
    // Classes double richness, so mass only drops by 4 per class:
    // sum mu^2 <= 4 * ceil(log2(2|P|)) * mass.
    FPINC_CHECK(sum_sq <= 4 * ceil_log2_2n(P.size()) * out.mass,
                "dyadic line mass below the pigeonhole floor");
    return out;
}

PointSet full_plane_points(const PlaneContext& ctx) {
    std::vector<AffinePoint> pts;
    pts.reserve(ctx.p() * ctx.p());
    for (Fe x = 0; x < ctx.p(); ++x)
        for (Fe y = 0; y < ctx.p(); ++y) pts.push_back({x, y});
    return PointSet(std::move(pts));
}

LineSet full_plane_lines(const PlaneContext& ctx) {
    std::vector<AffLine> lines;
    lines.reserve(ctx.p() * ctx.p() + ctx.p());
    // a = 1: b, c free. a = 0: b = 1, c free.
    for (Fe b = 0; b < ctx.p(); ++b)
        for (Fe c = 0; c < ctx.p(); ++c) lines.push_back({1, b, c});
    for (Fe c = 0; c < ctx.p(); ++c) lines.push_back({0, 1, c});
    return LineSet(std::move(lines));
}

} // namespace fpinc

#include "fpinc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <thread>

#include "fpinc/errors.hpp"
#include "fpinc/rng.hpp"

namespace fpinc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Generators enumerate index spaces up to p^2 + p in u64, so they are capped
// well below the field-size cap of PlaneContext.
constexpr u64 kGeneratorPrimeCap = 1ULL << 31;
// Full enumeration fallback inside sample_distinct stays affordable.
constexpr u64 kSampleRequestCap = 2'000'000;

// `count` distinct values of [0, universe), order deterministic in rng.
// Rejection-samples when the request is sparse, partial Fisher-Yates when it
// is dense enough that rejection would stall.
std::vector<u64> sample_distinct(SplitMix64& rng, u64 universe, u64 count) {
    FPINC_REQUIRE(count <= universe, "sample request exceeds its universe");
    FPINC_REQUIRE(count <= kSampleRequestCap, "sample request too large");
    std::vector<u64> out;
    out.reserve(count);
    if (count == 0) return out;
    if (universe <= 2 * count) {
        std::vector<u64> all(universe);
        std::iota(all.begin(), all.end(), u64{0});
        for (u64 i = 0; i < count; ++i) {
            u64 j = i + rng.bounded(universe - i);
            std::swap(all[i], all[j]);
            out.push_back(all[i]);
        }
        return out;
    }
    std::set<u64> seen;
    while (out.size() < count) {
        u64 v = rng.bounded(universe);
        if (seen.insert(v).second) out.push_back(v);
    }
    return out;
}

AffinePoint point_from_index(u64 p, u64 idx) {
    return AffinePoint{idx / p, idx % p};
}

// Canonical-line index space: [0, p^2) covers a = 1, the tail covers the
// vertical-free forms (0, 1, c).
AffLine line_from_index(u64 p, u64 idx) {
    if (idx < p * p) return AffLine{1, idx / p, idx % p};
    return AffLine{0, 1, idx - p * p};
}

// Some point of the line with parameter t in [0, p).
AffinePoint point_on_line(const PlaneContext& ctx, const AffLine& l, u64 t) {
    if (l.a == 0) return AffinePoint{t, l.c};                       // y = c
    if (l.b == 0) return AffinePoint{l.c, t};                       // x = c
    return AffinePoint{t, ctx.mul(ctx.sub(l.c, t), ctx.inv(l.b))};  // x + by = c
}

std::vector<Fe> sample_field_set(SplitMix64& rng, u64 p, u64 count) {
    FPINC_REQUIRE(count <= p, "set request exceeds the field size");
    std::vector<u64> raw = sample_distinct(rng, p, count);
    std::vector<Fe> out(raw.begin(), raw.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Fe> ap_set(SplitMix64& rng, const PlaneContext& ctx, u64 count) {
    const u64 p = ctx.p();
    FPINC_REQUIRE(count >= 1, "empty set request");
    FPINC_REQUIRE(count <= p, "set request exceeds the field size");
    Fe a0 = rng.bounded(p);
    Fe d = 1 + rng.bounded(p - 1);
    std::vector<Fe> out;
    out.reserve(count);
    Fe v = a0;
    for (u64 i = 0; i < count; ++i) {
        out.push_back(v);
        v = ctx.add(v, d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Fe> gp_set(SplitMix64& rng, const PlaneContext& ctx, u64 count) {
    const u64 p = ctx.p();
    FPINC_REQUIRE(p >= 3, "geometric family needs p >= 3");
    FPINC_REQUIRE(count >= 1, "empty set request");
    FPINC_REQUIRE(count <= p - 1, "set request exceeds the multiplicative group");
    Fe g = 2 + rng.bounded(p - 2);
    std::vector<Fe> out;
    out.reserve(count);
    Fe v = 1;
    for (u64 i = 0; i < count; ++i) {
        out.push_back(v);
        v = ctx.mul(v, g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<AffinePoint> grid_points(const std::vector<Fe>& A) {
    std::vector<AffinePoint> pts;
    pts.reserve(A.size() * A.size());
    for (Fe x : A)
        for (Fe y : A) pts.push_back(AffinePoint{x, y});
    return pts;
}

void require_generator_prime(const PlaneContext& ctx) {
    FPINC_REQUIRE(ctx.p() < kGeneratorPrimeCap,
                  "generator families need p below 2^31");
}

// --- pipeline internals ----------------------------------------------------

void fill_exponents(PipelineTrace& t, u64 class_mass, u64 level, u64 n_scale) {
    t.n_scale = static_cast<double>(n_scale);
    if (n_scale < 2 || class_mass == 0 || level == 0) return;
    const double logn = std::log(static_cast<double>(n_scale));
    t.mass_exponent_deficit = 1.5 - std::log(static_cast<double>(class_mass)) / logn;
    t.level_exponent_deficit = 0.5 - std::log(static_cast<double>(level)) / logn;
}

void fill_case_inequalities(PipelineTrace& t, u64 class_size, u64 level, u64 lines) {
    const u128 s = class_size, k = level, m = lines;
    t.ineq_case1 = (s * k * k <= m);
    t.ineq_case2 = (s * k * k * k <= m * m);
    t.ineq_case3 = (s * k * k * k * k * k <= m * m * m);
    t.ineq_case4 = (k * k * k * k * k <= m * m);
}

int fallback_case(const PipelineTrace& t) {
    if (t.ineq_case1.value_or(false)) return 1;
    if (t.ineq_case2.value_or(false)) return 2;
    if (t.ineq_case3.value_or(false)) return 3;
    return 4;
}

int config_error_case(const DataError& e) {
    const std::string what = e.what();
    if (what == kErrNoCoverCandidate) return 1;
    if (what == kErrNoTransversal) return 4;
    if (what == kErrEmptyCore) return 2;
    return 3;
}

// Configuration chase shared by both pipelines: two-apex, four-apex, strip
// the transversal, reduce, grid ratio. P1 is the dyadic point class against
// the working lines; degrees must already lie in [K, 2K).
void chase_configuration(const PlaneContext& ctx, PipelineTrace& t,
                         const PointSet& P1, const LineSet& work, u64 K) {
    TwoApexConfig two;
    try {
        two = find_two_apex_config(ctx, P1, work, K);
    } catch (const DataError& e) {
        t.terminal_case = config_error_case(e);
        t.reason = e.what();
        return;
    }
    t.two_apex = two;

    FourApexConfig four;
    try {
        four = find_four_apex_config(ctx, two, P1, work, K);
    } catch (const DataError& e) {
        t.terminal_case = config_error_case(e);
        t.reason = e.what();
        return;
    }
    t.four_apex = four;
    t.stage_count = 2;

    std::vector<AffinePoint> kept;
    u64 hits = 0;
    for (const AffinePoint& q : four.core) {
        if (incident(ctx, q, four.transversal)) {
            ++hits;
        } else {
            kept.push_back(q);
        }
    }
    t.transversal_hits = hits;
    t.stripped_size = kept.size();
    if (kept.empty()) {
        t.terminal_case = fallback_case(t);
        t.reason = "configuration core lies on the transversal";
        return;
    }

    GridReduction red;
    try {
        red = project_to_grid(ctx, four, PointSet(kept));
    } catch (const DataError& e) {
        t.terminal_case = fallback_case(t);
        t.reason = std::string("reduction failed: ") + e.what();
        return;
    }
    t.reduction = red;
    t.stage_count = 3;
    t.terminal_case = 5;
    try {
        t.grid_check = check_partial_sumprod(ctx, red.grid);
        t.reason = "reduction complete";
    } catch (const DataError& e) {
        t.reason = std::string("grid ratio undefined: ") + e.what();
    }
}

// --- serializer helpers ----------------------------------------------------

ordered_json point_json(const AffinePoint& pt) {
    return ordered_json::array({pt.x, pt.y});
}

ordered_json line_json(const AffLine& l) {
    return ordered_json::array({l.a, l.b, l.c});
}

ordered_json two_apex_json(const TwoApexConfig& c) {
    ordered_json j;
    j["apex1"] = point_json(c.apex1);
    j["apex2"] = point_json(c.apex2);
    j["core_size"] = c.core.size();
    j["k1"] = c.cover1.k;
    j["k2"] = c.cover2.k;
    j["size_ratio"] = c.size_ratio;
    return j;
}

ordered_json four_apex_json(const FourApexConfig& c) {
    ordered_json j;
    j["apex3"] = point_json(c.apex3);
    j["apex4"] = point_json(c.apex4);
    j["transversal"] = line_json(c.transversal);
    j["core_size"] = c.core.size();
    j["k3"] = c.cover3.k;
    j["k4"] = c.cover4.k;
    j["size_ratio"] = c.size_ratio;
    j["per_line_cap"] = c.per_line_cap;
    j["max_line_load"] = c.max_line_load;
    j["cap_respected"] = c.cap_respected;
    j["transversal_points"] = c.transversal_points;
    j["diagonal_sum"] = c.diagonal_sum;
    j["offdiagonal_sum"] = c.offdiagonal_sum;
    j["offdiagonal_dominates"] = c.offdiagonal_dominates;
    return j;
}

// --- sweep internals --------------------------------------------------------

ordered_json record_base_json(const SweepOptions& opts, const ExperimentRecord& r) {
    ordered_json j;
    j["family"] = r.family;
    j["p"] = r.p;
    j["size"] = r.size;
    j["seed"] = r.seed;
    j["mode"] = opts.mode;
    j["eps"] = opts.eps;
    return j;
}

void run_sweep_record(const PlaneContext& ctx, const SweepOptions& opts,
                      ExperimentRecord& rec) {
    GeneratorSpec gs = opts.base;
    gs.size = rec.size;
    gs.seed = rec.seed;
    if (opts.mode == "beck") {
        Instance inst = generate(ctx, gs);
        PipelineTrace t = run_beck_pipeline(ctx, inst.points);
        rec.incidences = t.incidences;
        rec.determined_lines = t.determined_lines;
        rec.max_collinear_count = t.max_collinear_count;
        rec.terminal_case = t.terminal_case;
        rec.exponent = t.determined_exponent;
        if (t.grid_check) rec.ratio_grid = t.grid_check->ratio;
        rec.full["trace"] = trace_json(t);
    } else if (opts.mode == "incidence") {
        Instance inst = generate(ctx, gs);
        LineSet L = inst.family_lines ? inst.lines
                                      : lines_determined(ctx, inst.points);
        PipelineTrace t = run_incidence_pipeline(ctx, inst.points, L);
        if (!inst.family_lines) rec.determined_lines = L.size();
        rec.incidences = t.incidences;
        rec.terminal_case = t.terminal_case;
        if (t.grid_check) rec.ratio_grid = t.grid_check->ratio;
        rec.full["trace"] = trace_json(t);
    } else if (opts.mode == "rudnev") {
        std::vector<Fe> A = generate_set(ctx, gs);
        RudnevReport rr = check_rudnev(ctx, A);
        rec.ratio_rudnev = rr.ratio;
        GridInstance g = GridInstance::complete(ctx, A, A);
        PartialSumprodReport pr = check_partial_sumprod(ctx, g);
        rec.ratio_grid = pr.ratio;
        rec.full["rudnev"] = rudnev_json(rr);
        rec.full["grid_check"] = grid_check_json(pr);
    } else if (opts.mode == "halfbsg") {
        std::vector<Fe> A = generate_set(ctx, gs);
        const u64 n = A.size();
        FPINC_REQUIRE(n >= 2, "half-bsg sweep needs at least two elements");
        // Dense grid: complete A x A minus a seeded eps/2 fraction of edges,
        // which keeps every popularity floor inside half_bsg satisfiable.
        std::vector<std::pair<Fe, Fe>> edges;
        edges.reserve(n * n);
        for (Fe a : A)
            for (Fe b : A) edges.emplace_back(a, b);
        const double eff = std::min(opts.eps, 0.0624);
        const u64 drop =
            static_cast<u64>(eff * static_cast<double>(n * n) / 2.0);
        SplitMix64 dropper(mix_u64(rec.seed, hash_str("halfbsg-dropper")));
        std::vector<u64> doomed = sample_distinct(dropper, n * n, drop);
        std::sort(doomed.begin(), doomed.end(), std::greater<u64>());
        for (u64 idx : doomed) edges.erase(edges.begin() + idx);
        GridInstance g(ctx, A, A, edges);
        HalfBsgResult hb = half_bsg(ctx, g, opts.eps);
        PartialSumprodReport pr = check_partial_sumprod(ctx, g);
        rec.ratio_grid = pr.ratio;
        rec.full["half_bsg"] = half_bsg_json(hb);
        rec.full["grid_check"] = grid_check_json(pr);
    } else {
        throw DataError("unknown sweep mode: " + opts.mode);
    }
}

std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
void append_opt(std::string& row, const std::optional<T>& v) {
    row.push_back(',');
    if (!v) return;
    if constexpr (std::is_same_v<T, double>) {
        row += csv_double(*v);
    } else {
        row += std::to_string(*v);
    }
}

} // namespace

Instance generate(const PlaneContext& ctx, const GeneratorSpec& spec) {
    FPINC_REQUIRE(spec.p == ctx.p(), "context and generator spec disagree on p");
    require_generator_prime(ctx);
    const u64 p = ctx.p();
    const u64 plane = p * p;
    const u64 line_universe = plane + p;
    SplitMix64 rng(spec.seed);
    Instance out;

    if (spec.family == "random") {
        FPINC_REQUIRE(spec.size <= plane, "point request exceeds the plane");
        std::vector<AffinePoint> pts;
        pts.reserve(spec.size);
        for (u64 idx : sample_distinct(rng, plane, spec.size))
            pts.push_back(point_from_index(p, idx));
        const u64 m = spec.line_count ? spec.line_count : spec.size;
        FPINC_REQUIRE(m <= line_universe, "line request exceeds the plane");
        std::vector<AffLine> lines;
        lines.reserve(m);
        for (u64 idx : sample_distinct(rng, line_universe, m))
            lines.push_back(line_from_index(p, idx));
        out.points = PointSet(std::move(pts));
        out.lines = LineSet(std::move(lines));
        out.family_lines = true;
        return out;
    }
    if (spec.family == "grid") {
        std::vector<Fe> A = sample_field_set(rng, p, spec.size);
        out.points = PointSet(grid_points(A));
        out.set1d = std::move(A);
        out.has_set1d = true;
        return out;
    }
    if (spec.family == "ap") {
        std::vector<Fe> A = ap_set(rng, ctx, spec.size);
        out.points = PointSet(grid_points(A));
        out.set1d = std::move(A);
        out.has_set1d = true;
        return out;
    }
    if (spec.family == "gp") {
        std::vector<Fe> A = gp_set(rng, ctx, spec.size);
        out.points = PointSet(grid_points(A));
        out.set1d = std::move(A);
        out.has_set1d = true;
        return out;
    }
    if (spec.family == "union-of-lines") {
        const u64 j = spec.line_count ? spec.line_count
                                      : std::max<u64>(2, spec.size / 10);
        FPINC_REQUIRE(j >= 1, "need at least one carrier line");
        FPINC_REQUIRE(j <= line_universe, "line request exceeds the plane");
        // j lines always carry at least j*p - j^2 distinct points.
        FPINC_REQUIRE(j * p >= spec.size + j * j,
                      "point request exceeds the carrier lines");
        std::vector<AffLine> lines;
        lines.reserve(j);
        for (u64 idx : sample_distinct(rng, line_universe, j))
            lines.push_back(line_from_index(p, idx));
        std::set<AffinePoint> seen;
        u64 stall = 0;
        std::size_t turn = 0;
        while (seen.size() < spec.size) {
            FPINC_REQUIRE(++stall <= 200 * spec.size + 10'000,
                          "point sampling stalled");
            const AffLine& l = lines[turn++ % lines.size()];
            seen.insert(point_on_line(ctx, l, rng.bounded(p)));
        }
        out.points = PointSet(std::vector<AffinePoint>(seen.begin(), seen.end()));
        out.lines = LineSet(std::move(lines));
        out.family_lines = true;
        return out;
    }
    if (spec.family == "near-collinear") {
        FPINC_REQUIRE(spec.size >= 1, "empty point request");
        FPINC_REQUIRE(spec.size <= plane, "point request exceeds the plane");
        const u64 off_target = spec.size / 8;
        const u64 on_target = spec.size - off_target;
        FPINC_REQUIRE(on_target <= p, "carrier line cannot hold that many points");
        AffLine base = line_from_index(p, rng.bounded(line_universe));
        std::set<AffinePoint> seen;
        for (u64 t : sample_distinct(rng, p, on_target))
            seen.insert(point_on_line(ctx, base, t));
        u64 stall = 0;
        while (seen.size() < spec.size) {
            FPINC_REQUIRE(++stall <= 200 * spec.size + 10'000,
                          "point sampling stalled");
            AffinePoint q = point_from_index(p, rng.bounded(plane));
            if (!incident(ctx, q, base)) seen.insert(q);
        }
        out.points = PointSet(std::vector<AffinePoint>(seen.begin(), seen.end()));
        return out;
    }
    if (spec.family == "collinear") {
        FPINC_REQUIRE(spec.size <= p, "carrier line cannot hold that many points");
        AffLine base = line_from_index(p, rng.bounded(line_universe));
        std::vector<AffinePoint> pts;
        pts.reserve(spec.size);
        for (u64 t : sample_distinct(rng, p, spec.size))
            pts.push_back(point_on_line(ctx, base, t));
        out.points = PointSet(std::move(pts));
        return out;
    }
    if (spec.family == "full-plane") {
        FPINC_REQUIRE(p <= 1024, "full plane too large to enumerate");
        out.points = full_plane_points(ctx);
        out.lines = full_plane_lines(ctx);
        out.family_lines = true;
        return out;
    }
    throw DataError("unknown family: " + spec.family);
}

std::vector<Fe> generate_set(const PlaneContext& ctx, const GeneratorSpec& spec) {
    FPINC_REQUIRE(spec.p == ctx.p(), "context and generator spec disagree on p");
    require_generator_prime(ctx);
    SplitMix64 rng(spec.seed);
    if (spec.family == "random" || spec.family == "grid")
        return sample_field_set(rng, ctx.p(), spec.size);
    if (spec.family == "ap") return ap_set(rng, ctx, spec.size);
    if (spec.family == "gp") return gp_set(rng, ctx, spec.size);
    throw DataError("family has no 1-d set: " + spec.family);
}

PipelineTrace run_incidence_pipeline(const PlaneContext& ctx, const PointSet& P,
                                     const LineSet& L) {
    PipelineTrace t;
    t.kind = "incidence";
    t.point_count = P.size();
    t.line_count = L.size();
    t.n_scale = static_cast<double>(std::max(P.size(), L.size()));
    t.stage_count = 1;

    const bool trivially_empty = P.empty() || L.empty();
    if (!trivially_empty) {
        if (count_incidences(ctx, P, L).total == 0) {
            t.working_line_count = L.size();
        } else {
            LineSet work = refine_bounded_lines(ctx, P, L);
            t.working_line_count = work.size();
            t.incidences = count_incidences(ctx, P, work).total;
            DyadicPointClass dy = dyadic_select_points(ctx, P, work);
            t.degree_level = dy.level;
            t.degree_class_size = dy.selected.size();
            fill_exponents(t, dy.mass, dy.level, std::max(P.size(), L.size()));
            fill_case_inequalities(t, dy.selected.size(), dy.level, work.size());
            chase_configuration(ctx, t, dy.selected, work, dy.level);
            return t;
        }
    } else {
        t.working_line_count = L.size();
    }
    t.terminal_case = 1;
    t.reason = "no incidences";
    return t;
}

PipelineTrace run_beck_pipeline(const PlaneContext& ctx, const PointSet& P) {
    FPINC_REQUIRE(P.size() >= 2, "need at least two points");
    PipelineTrace t;
    t.kind = "determined-lines";
    t.point_count = P.size();
    t.stage_count = 1;

    LineSet LP = lines_determined(ctx, P);
    t.line_count = LP.size();
    t.determined_lines = LP.size();
    t.max_collinear_count = max_collinear(ctx, P).second;
    if (P.size() >= 2 && LP.size() >= 1) {
        t.determined_exponent = std::log(static_cast<double>(LP.size())) /
                                std::log(static_cast<double>(P.size()));
    }

    DyadicLineClass dl = dyadic_select_lines(ctx, P, LP);
    t.richness_level = dl.level;
    t.richness_class_size = dl.selected.size();
    t.working_line_count = dl.selected.size();
    t.richness_mass_ratio =
        static_cast<double>(dl.mass) /
        (static_cast<double>(P.size()) * static_cast<double>(P.size()));
    t.incidences = count_incidences(ctx, P, dl.selected).total;
    if (t.incidences == 0) {
        t.terminal_case = 1;
        t.reason = "no incidences";
        return t;
    }

    DyadicPointClass dy = dyadic_select_points(ctx, P, dl.selected);
    t.degree_level = dy.level;
    t.degree_class_size = dy.selected.size();
    if (dl.mass > 0) {
        t.reselect_ratio =
            static_cast<double>(dy.selected.size()) *
            static_cast<double>(dy.level) /
            (static_cast<double>(dl.selected.size()) *
             static_cast<double>(dl.level));
    }
    fill_exponents(t, dy.mass, dy.level, P.size());
    fill_case_inequalities(t, dy.selected.size(), dy.level, dl.selected.size());
    chase_configuration(ctx, t, dy.selected, dl.selected, dy.level);
    return t;
}

ordered_json trace_json(const PipelineTrace& t) {
    ordered_json j;
    j["kind"] = t.kind;
    j["case"] = t.terminal_case;
    j["reason"] = t.reason;
    j["stages"] = t.stage_count;
    j["points"] = t.point_count;
    j["lines"] = t.line_count;
    j["working_lines"] = t.working_line_count;
    j["incidences"] = t.incidences;
    j["degree_level"] = t.degree_level;
    j["degree_class_size"] = t.degree_class_size;
    if (t.richness_level) j["richness_level"] = *t.richness_level;
    if (t.richness_class_size) j["richness_class_size"] = *t.richness_class_size;
    if (t.n_scale) j["n_scale"] = *t.n_scale;
    if (t.mass_exponent_deficit)
        j["mass_exponent_deficit"] = *t.mass_exponent_deficit;
    if (t.level_exponent_deficit)
        j["level_exponent_deficit"] = *t.level_exponent_deficit;
    if (t.richness_mass_ratio) j["richness_mass_ratio"] = *t.richness_mass_ratio;
    if (t.reselect_ratio) j["reselect_ratio"] = *t.reselect_ratio;
    if (t.ineq_case1) {
        ordered_json ineq;
        ineq["case1"] = *t.ineq_case1;
        ineq["case2"] = *t.ineq_case2;
        ineq["case3"] = *t.ineq_case3;
        ineq["case4"] = *t.ineq_case4;
        j["case_inequalities"] = ineq;
    }
    if (t.two_apex) j["two_apex"] = two_apex_json(*t.two_apex);
    if (t.four_apex) j["four_apex"] = four_apex_json(*t.four_apex);
    if (t.stripped_size) j["stripped_size"] = *t.stripped_size;
    if (t.transversal_hits) j["transversal_hits"] = *t.transversal_hits;
    if (t.reduction) j["reduction"] = reduction_json(*t.reduction);
    if (t.grid_check) j["grid_check"] = grid_check_json(*t.grid_check);
    if (t.determined_lines) j["determined_lines"] = *t.determined_lines;
    if (t.max_collinear_count) j["max_collinear"] = *t.max_collinear_count;
    if (t.determined_exponent) j["determined_exponent"] = *t.determined_exponent;
    return j;
}

ordered_json reduction_json(const GridReduction& r) {
    ordered_json j;
    ordered_json tau = ordered_json::array();
    for (const auto& row : r.tau.m)
        tau.push_back(ordered_json::array({row[0], row[1], row[2]}));
    j["tau"] = tau;
    j["applied_scale"] = r.applied_scale;
    j["pencil_gradient"] = r.pencil_gradient;
    j["k1"] = r.k1;
    j["k2"] = r.k2;
    j["k3"] = r.k3;
    j["k4"] = r.k4;
    j["a_size"] = r.grid.a_values().size();
    j["b_size"] = r.grid.b_values().size();
    j["edge_count"] = r.grid.edges().size();
    j["lambda"] = r.grid.lambda();
    j["diff_count"] = r.diff_count;
    j["ratio_count"] = r.ratio_count;
    j["undefined_ratio_edges"] = r.undefined_ratio_edges;
    j["diff_le_k2"] = r.diff_le_k2;
    j["ratio_le_k1"] = r.ratio_le_k1;
    j["diff_le_k1"] = r.diff_le_k1;
    j["ratio_le_k2"] = r.ratio_le_k2;
    return j;
}

ordered_json rudnev_json(const RudnevReport& r) {
    ordered_json j;
    j["set_size"] = r.set_size;
    j["energy"] = r.energy;
    j["diff_size"] = r.diff_size;
    j["size_warning"] = r.size_warning;
    j["numerator"] = r.numerator;
    j["denominator"] = r.denominator;
    j["ratio"] = r.ratio;
    j["positive_finite"] = r.positive_finite;
    return j;
}

ordered_json grid_check_json(const PartialSumprodReport& r) {
    ordered_json j;
    j["edge_count"] = r.edge_count;
    j["a_size"] = r.a_size;
    j["b_size"] = r.b_size;
    j["diff_count"] = r.diff_count;
    j["ratio_count"] = r.ratio_count;
    j["undefined_ratio_edges"] = r.undefined_ratio_edges;
    j["grid_warning"] = r.grid_warning;
    j["numerator"] = r.numerator;
    j["denominator"] = r.denominator;
    j["ratio"] = r.ratio;
    j["positive_finite"] = r.positive_finite;
    return j;
}

ordered_json energy_json(const EnergyReport& r) {
    ordered_json j;
    j["energy"] = r.energy;
    j["method"] = r.method;
    ordered_json hist = ordered_json::array();
    for (const auto& [value, count] : r.histogram)
        hist.push_back(ordered_json::array({value, count}));
    j["histogram"] = hist;
    return j;
}

ordered_json half_bsg_json(const HalfBsgResult& r) {
    ordered_json j;
    j["subset_size"] = r.graph.subset.selected.size();
    j["threshold"] = r.graph.subset.threshold;
    j["pair_fraction"] = r.graph.subset.pair_fraction;
    j["codegree_ratio"] = r.graph.subset.codegree_ratio;
    j["size_ratio"] = r.graph.subset.size_ratio;
    j["pair_count"] = r.graph.pairs.size();
    j["core_size"] = r.core.size();
    j["core_pair_count"] = r.core_pairs.size();
    j["core_diff_size"] = r.core_diff.size();
    j["core_ratio_size"] = r.core_ratio.size();
    j["undefined_core_ratio_edges"] = r.undefined_core_ratio_edges;
    j["energy"] = r.energy.energy;
    j["diff_ceiling_ratio"] = r.diff_ceiling_ratio;
    j["energy_floor_ratio"] = r.energy_floor_ratio;
    return j;
}

std::vector<ExperimentRecord> sweep(const SweepOptions& opts) {
    FPINC_REQUIRE(opts.seeds_per_size >= 1, "need at least one seed per size");
    PlaneContext ctx(opts.base.p);
    const std::size_t total = opts.sizes.size() * opts.seeds_per_size;
    std::vector<ExperimentRecord> recs(total);

    auto run_one = [&](std::size_t idx) {
        ExperimentRecord& rec = recs[idx];
        rec.family = opts.base.family;
        rec.p = opts.base.p;
        rec.size = opts.sizes[idx / opts.seeds_per_size];
        rec.seed = instance_seed(opts.base.seed, opts.base.family, rec.size,
                                 idx % opts.seeds_per_size);
        rec.full = record_base_json(opts, rec);
        const auto start = std::chrono::steady_clock::now();
        try {
            run_sweep_record(ctx, opts, rec);
            rec.ok = true;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
            rec.full["error"] = rec.error;
        }
        rec.full["ok"] = rec.ok;
        if (opts.timing) {
            const auto stop = std::chrono::steady_clock::now();
            rec.full["wall_ms"] =
                std::chrono::duration<double, std::milli>(stop - start).count();
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_one(i);
        return recs;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t idx = cursor.fetch_add(1);
                if (idx >= total) return;
                run_one(idx);
            }
        });
    }
    for (auto& th : pool) th.join();
    return recs;
}

std::string records_jsonl(const std::vector<ExperimentRecord>& recs) {
    std::string out;
    for (const ExperimentRecord& r : recs) {
        out += r.full.dump();
        out.push_back('\n');
    }
    return out;
}

std::string records_csv(const std::vector<ExperimentRecord>& recs) {
    std::string out =
        "family,p,size,seed,incidences,determined_lines,max_collinear,case,"
        "ratio_rudnev,ratio_grid,exponent\n";
    for (const ExperimentRecord& r : recs) {
        std::string row = r.family;
        row += ',' + std::to_string(r.p);
        row += ',' + std::to_string(r.size);
        row += ',' + std::to_string(r.seed);
        append_opt(row, r.incidences);
        append_opt(row, r.determined_lines);
        append_opt(row, r.max_collinear_count);
        append_opt(row, r.terminal_case);
        append_opt(row, r.ratio_rudnev);
        append_opt(row, r.ratio_grid);
        append_opt(row, r.exponent);
        row.push_back('\n');
        out += row;
    }
    return out;
}

} // namespace fpinc

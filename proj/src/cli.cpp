#include "fpinc/cli.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpinc/errors.hpp"
#include "fpinc/harness.hpp"
#include "fpinc/io.hpp"
#include "fpinc/rng.hpp"

namespace fpinc {

namespace {

using u64 = std::uint64_t;

u64 env_master_seed() {
    const char* s = std::getenv("FPINC_SEED");
    if (!s || !*s) return 1;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    FPINC_REQUIRE(errno == 0 && end && *end == '\0', "bad FPINC_SEED value");
    return v;
}

// Generator-or-files input shared by the geometry subcommands.
struct SourceOpts {
    std::string points_file;
    std::string lines_file;
    std::string family;
    u64 p = 0;
    u64 n = 0;
    u64 m = 0;
    std::optional<u64> seed;
};

void add_source_options(CLI::App* sub, SourceOpts& src, bool lines_input) {
    sub->add_option("--p", src.p, "field prime")->required();
    sub->add_option("--points", src.points_file, "points CSV (x,y rows)");
    if (lines_input)
        sub->add_option("--lines", src.lines_file, "lines CSV (a,b,c rows)");
    sub->add_option("--family", src.family,
                    "generator family: random | grid | ap | gp | "
                    "union-of-lines | near-collinear | collinear | full-plane");
    sub->add_option("--n", src.n, "generator size (points or set elements)");
    sub->add_option("--m", src.m, "generator line count (family default if 0)");
    sub->add_option("--seed", src.seed, "instance seed (default: FPINC_SEED or 1)");
}

// nullopt when the flags are inconsistent; the message goes to err.
std::optional<Instance> resolve_instance(const PlaneContext& ctx,
                                         const SourceOpts& src, bool need_lines,
                                         std::ostream& err) {
    const bool from_files = !src.points_file.empty();
    const bool from_family = !src.family.empty();
    if (from_files == from_family) {
        err << "error: give exactly one input source, --points or --family\n";
        return std::nullopt;
    }
    if (from_family && !src.lines_file.empty()) {
        err << "error: --lines only combines with --points\n";
        return std::nullopt;
    }
    Instance inst;
    if (from_files) {
        inst.points = load_points(ctx, src.points_file);
        if (!src.lines_file.empty()) {
            inst.lines = load_lines(ctx, src.lines_file);
            inst.family_lines = true;
        }
    } else {
        GeneratorSpec spec{src.family, ctx.p(), src.n, src.m,
                           src.seed ? *src.seed : env_master_seed()};
        inst = generate(ctx, spec);
    }
    if (!inst.family_lines && need_lines)
        inst.lines = lines_determined(ctx, inst.points);
    return inst;
}

std::optional<std::vector<u64>> parse_sizes(const std::string& s,
                                            std::ostream& err) {
    std::vector<u64> out;
    std::size_t pos = 0;
    auto bad = [&]() -> std::optional<std::vector<u64>> {
        err << "error: --sizes wants N, A..B or A..B..STEP, comma separated\n";
        return std::nullopt;
    };
    auto number = [&](const std::string& tok, std::size_t& at,
                      u64& val) -> bool {
        std::size_t start = at;
        while (at < tok.size() && std::isdigit(static_cast<unsigned char>(tok[at])))
            ++at;
        if (at == start) return false;
        errno = 0;
        val = std::strtoull(tok.substr(start, at - start).c_str(), nullptr, 10);
        return errno == 0;
    };
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos
                                            ? std::string::npos
                                            : comma - pos);
        pos = comma == std::string::npos ? s.size() + 1 : comma + 1;
        if (tok.empty()) return bad();
        std::size_t at = 0;
        u64 lo = 0, hi = 0, step = 1;
        if (!number(tok, at, lo)) return bad();
        if (at == tok.size()) {
            out.push_back(lo);
            continue;
        }
        if (tok.compare(at, 2, "..") != 0) return bad();
        at += 2;
        if (!number(tok, at, hi)) return bad();
        if (at != tok.size()) {
            if (tok.compare(at, 2, "..") != 0) return bad();
            at += 2;
            if (!number(tok, at, step) || at != tok.size() || step == 0)
                return bad();
        }
        if (hi < lo) return bad();
        for (u64 v = lo; v <= hi; v += step) {
            out.push_back(v);
            if (v > hi - step) break;  // u64 wrap guard
        }
    }
    if (out.empty()) return bad();
    return out;
}

std::optional<std::vector<Fe>> parse_values(const std::string& s,
                                            std::ostream& err) {
    std::vector<Fe> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos
                                            ? std::string::npos
                                            : comma - pos);
        pos = comma == std::string::npos ? s.size() + 1 : comma + 1;
        errno = 0;
        char* end = nullptr;
        unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
        if (tok.empty() || errno != 0 || !end || *end != '\0') {
            err << "error: --values wants comma-separated integers\n";
            return std::nullopt;
        }
        out.push_back(v);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    FPINC_REQUIRE(f.good(), "cannot open " + path);
    f << content;
    FPINC_REQUIRE(f.good(), "write failed on " + path);
}

// Trace summary: the full trace minus the nested stage objects.
ordered_json trace_summary(const PipelineTrace& t, bool full) {
    ordered_json j = trace_json(t);
    if (!full) {
        for (const char* k : {"case_inequalities", "two_apex", "four_apex",
                              "reduction", "grid_check"})
            j.erase(k);
    }
    return j;
}

ordered_json guarded(const std::function<ordered_json()>& f) {
    try {
        return f();
    } catch (const DataError& e) {
        ordered_json j;
        j["error"] = e.what();
        return j;
    }
}

ordered_json partial_sets_json(const PlaneContext& ctx, const GridInstance& g) {
    ordered_json j;
    j["edge_count"] = g.edges().size();
    j["a_size"] = g.a_values().size();
    j["b_size"] = g.b_values().size();
    auto section = [&](const std::vector<Fe>& set) {
        ordered_json s;
        s["count"] = set.size();
        if (set.size() <= 64) s["set"] = set;
        return s;
    };
    j["sum"] = section(partial_set(ctx, g, '+'));
    j["difference"] = section(partial_set(ctx, g, '-'));
    j["product"] = section(partial_set(ctx, g, '*'));
    auto [ratio, undefined] = partial_ratio_defined(ctx, g.edges());
    ordered_json r = section(ratio);
    r["undefined_edges"] = undefined;
    j["ratio"] = r;
    return j;
}

ordered_json energy_section_json(const PlaneContext& ctx, const GridInstance& g) {
    ordered_json j = energy_json(mult_energy(ctx, g.a_values()));
    if (j["histogram"].size() > 512) {
        const auto buckets = j["histogram"].size();
        j.erase("histogram");
        j["histogram_buckets"] = buckets;
    }
    return j;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    CLI::App app{"incidence and sum-product experiments over a prime plane"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "indent JSON output");

    auto emit = [&](const ordered_json& j) {
        out << (pretty ? j.dump(2) : j.dump()) << "\n";
    };

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
    SourceOpts gen_src;
    gen_cmd->add_option("--p", gen_src.p, "field prime")->required();
    gen_cmd->add_option("--family", gen_src.family, "generator family")
        ->required();
    gen_cmd->add_option("--n", gen_src.n, "size");
    gen_cmd->add_option("--m", gen_src.m, "line count (family default if 0)");
    gen_cmd->add_option("--seed", gen_src.seed, "instance seed");
    std::string gen_out_points, gen_out_lines;
    gen_cmd->add_option("--out-points", gen_out_points, "write points CSV here");
    gen_cmd->add_option("--out-lines", gen_out_lines, "write lines CSV here");

    // incidences
    auto* inc_cmd = app.add_subcommand("incidences", "count point-line incidences");
    SourceOpts inc_src;
    add_source_options(inc_cmd, inc_src, true);
    bool inc_naive = false;
    inc_cmd->add_flag("--naive", inc_naive,
                      "also run the pair-loop counter and compare");

    // pipeline
    auto* pipe_cmd =
        app.add_subcommand("pipeline", "run the staged incidence pipeline");
    SourceOpts pipe_src;
    add_source_options(pipe_cmd, pipe_src, true);
    bool pipe_trace = false;
    pipe_cmd->add_flag("--trace", pipe_trace, "include the nested stage objects");

    // beck
    auto* beck_cmd =
        app.add_subcommand("beck", "run the determined-lines pipeline");
    SourceOpts beck_src;
    add_source_options(beck_cmd, beck_src, false);
    bool beck_trace = false;
    beck_cmd->add_flag("--trace", beck_trace, "include the nested stage objects");

    // sumprod
    auto* sum_cmd =
        app.add_subcommand("sumprod", "checks on a multiplicative grid file");
    std::string sum_grid, sum_check = "all";
    double sum_eps = 0.01;
    sum_cmd->add_option("--grid", sum_grid, "grid JSON file")->required();
    sum_cmd
        ->add_option("--check", sum_check,
                     "energy | partial | halfbsg | grid | all")
        ->check(CLI::IsMember({"energy", "partial", "halfbsg", "grid", "all"}));
    sum_cmd->add_option("--eps", sum_eps, "slack for the halfbsg chain");

    // rudnev
    auto* rud_cmd =
        app.add_subcommand("rudnev", "energy-to-difference ratio of a set");
    u64 rud_p = 0;
    std::string rud_values;
    SourceOpts rud_src;
    rud_cmd->add_option("--p", rud_p, "field prime")->required();
    rud_cmd->add_option("--values", rud_values, "comma-separated set elements");
    rud_cmd->add_option("--family", rud_src.family, "set family: random | grid | ap | gp");
    rud_cmd->add_option("--n", rud_src.n, "set size");
    rud_cmd->add_option("--seed", rud_src.seed, "instance seed");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "seeded experiment sweep");
    SweepOptions sw;
    std::string sw_sizes, sw_out, sw_csv;
    std::optional<u64> sw_seed;
    sweep_cmd->add_option("--family", sw.base.family, "generator family")
        ->required();
    sweep_cmd->add_option("--p", sw.base.p, "field prime")->required();
    sweep_cmd->add_option("--sizes", sw_sizes, "sizes: N, A..B or A..B..STEP")
        ->required();
    sweep_cmd->add_option("--seeds", sw.seeds_per_size, "instances per size");
    sweep_cmd->add_option("--m", sw.base.line_count, "generator line count");
    sweep_cmd
        ->add_option("--mode", sw.mode, "beck | incidence | rudnev | halfbsg")
        ->check(CLI::IsMember({"beck", "incidence", "rudnev", "halfbsg"}));
    sweep_cmd->add_option("--eps", sw.eps, "slack for the halfbsg mode");
    sweep_cmd->add_option("--jobs", sw.jobs, "worker threads");
    sweep_cmd->add_option("--seed", sw_seed, "master seed (default: FPINC_SEED or 1)");
    sweep_cmd->add_option("--out", sw_out, "write JSONL here instead of stdout");
    sweep_cmd->add_option("--csv", sw_csv, "also write a CSV summary here");
    sweep_cmd->add_flag("--timing", sw.timing,
                        "record wall time (breaks byte-for-byte determinism)");

    // unmatched subcommand flags (--pretty in particular) climb to the app
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (app.got_subcommand(gen_cmd)) {
            PlaneContext ctx(gen_src.p);
            GeneratorSpec spec{gen_src.family, gen_src.p, gen_src.n, gen_src.m,
                               gen_src.seed ? *gen_src.seed : env_master_seed()};
            Instance inst = generate(ctx, spec);
            if (!gen_out_points.empty()) save_points(inst.points, gen_out_points);
            if (!gen_out_lines.empty()) {
                FPINC_REQUIRE(inst.family_lines, "family produced no lines");
                save_lines(inst.lines, gen_out_lines);
            }
            ordered_json j;
            j["family"] = spec.family;
            j["p"] = spec.p;
            j["size"] = spec.size;
            j["seed"] = spec.seed;
            j["points"] = inst.points.size();
            if (inst.family_lines) j["lines"] = inst.lines.size();
            if (inst.has_set1d && inst.set1d.size() <= 4096)
                j["set"] = inst.set1d;
            emit(j);
            return 0;
        }
        if (app.got_subcommand(inc_cmd)) {
            PlaneContext ctx(inc_src.p);
            auto inst = resolve_instance(ctx, inc_src, true, err);
            if (!inst) return 1;
            IncidenceProfile prof = count_incidences(ctx, inst->points, inst->lines);
            ordered_json j;
            j["points"] = inst->points.size();
            j["lines"] = inst->lines.size();
            j["incidences"] = prof.total;
            if (inc_naive) {
                IncidenceProfile ref =
                    count_incidences_naive(ctx, inst->points, inst->lines);
                j["naive_agrees"] = ref.total == prof.total &&
                                    ref.point_degree == prof.point_degree &&
                                    ref.line_richness == prof.line_richness;
            }
            emit(j);
            return 0;
        }
        if (app.got_subcommand(pipe_cmd)) {
            PlaneContext ctx(pipe_src.p);
            auto inst = resolve_instance(ctx, pipe_src, true, err);
            if (!inst) return 1;
            PipelineTrace t = run_incidence_pipeline(ctx, inst->points, inst->lines);
            emit(trace_summary(t, pipe_trace));
            return 0;
        }
        if (app.got_subcommand(beck_cmd)) {
            PlaneContext ctx(beck_src.p);
            auto inst = resolve_instance(ctx, beck_src, false, err);
            if (!inst) return 1;
            PipelineTrace t = run_beck_pipeline(ctx, inst->points);
            emit(trace_summary(t, beck_trace));
            return 0;
        }
        if (app.got_subcommand(sum_cmd)) {
            LoadedGrid lg = load_grid(sum_grid);
            PlaneContext ctx(lg.p);
            const GridInstance& g = lg.grid;
            if (sum_check == "energy") {
                emit(energy_section_json(ctx, g));
            } else if (sum_check == "partial") {
                emit(partial_sets_json(ctx, g));
            } else if (sum_check == "halfbsg") {
                emit(half_bsg_json(half_bsg(ctx, g, sum_eps)));
            } else if (sum_check == "grid") {
                emit(grid_check_json(check_partial_sumprod(ctx, g)));
            } else {
                ordered_json j;
                j["energy"] = guarded([&] { return energy_section_json(ctx, g); });
                j["partial"] = guarded([&] { return partial_sets_json(ctx, g); });
                j["half_bsg"] =
                    guarded([&] { return half_bsg_json(half_bsg(ctx, g, sum_eps)); });
                j["grid_check"] =
                    guarded([&] { return grid_check_json(check_partial_sumprod(ctx, g)); });
                emit(j);
            }
            return 0;
        }
        if (app.got_subcommand(rud_cmd)) {
            PlaneContext ctx(rud_p);
            const bool from_values = !rud_values.empty();
            const bool from_family = !rud_src.family.empty();
            if (from_values == from_family) {
                err << "error: give exactly one input source, --values or --family\n";
                return 1;
            }
            std::vector<Fe> A;
            if (from_values) {
                auto parsed = parse_values(rud_values, err);
                if (!parsed) return 1;
                A = std::move(*parsed);
            } else {
                GeneratorSpec spec{rud_src.family, rud_p, rud_src.n, 0,
                                   rud_src.seed ? *rud_src.seed
                                                : env_master_seed()};
                A = generate_set(ctx, spec);
            }
            emit(rudnev_json(check_rudnev(ctx, A)));
            return 0;
        }
        if (app.got_subcommand(sweep_cmd)) {
            auto sizes = parse_sizes(sw_sizes, err);
            if (!sizes) return 1;
            sw.sizes = std::move(*sizes);
            sw.base.seed = sw_seed ? *sw_seed : env_master_seed();
            std::vector<ExperimentRecord> recs = sweep(sw);
            if (!sw_csv.empty()) write_file(sw_csv, records_csv(recs));
            if (!sw_out.empty()) write_file(sw_out, records_jsonl(recs));
            if (sw_out.empty() && sw_csv.empty()) {
                out << records_jsonl(recs);
            } else {
                u64 failures = 0;
                for (const auto& r : recs)
                    if (!r.ok) ++failures;
                ordered_json j;
                j["records"] = recs.size();
                j["failures"] = failures;
                if (!sw_out.empty()) j["out"] = sw_out;
                if (!sw_csv.empty()) j["csv"] = sw_csv;
                emit(j);
            }
            return 0;
        }
        err << "error: no subcommand\n";
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace fpinc

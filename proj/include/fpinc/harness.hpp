#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpinc/incidence.hpp"
#include "fpinc/refine.hpp"
#include "fpinc/sumprod.hpp"

namespace fpinc {

using ordered_json = nlohmann::ordered_json;

// Seed-deterministic instance descriptor. size is the point budget (or the
// 1-d set size for the set families); line_count 0 means the family default.
struct GeneratorSpec {
    std::string family;   // random | grid | ap | gp | union-of-lines |
                          // near-collinear | collinear | full-plane
    std::uint64_t p = 0;
    std::uint64_t size = 0;
    std::uint64_t line_count = 0;
    std::uint64_t seed = 0;
};

struct Instance {
    PointSet points;
    LineSet lines;           // family lines; lines_determined(points) fallback
    bool family_lines = false;
    std::vector<Fe> set1d;   // the underlying 1-d set where one exists
    bool has_set1d = false;
};

// Deterministic generation; same spec, same instance. DataError on unknown
// family or oversize request.
Instance generate(const PlaneContext& ctx, const GeneratorSpec& spec);
// Just the 1-d set of a set family (ap, gp, random, grid).
std::vector<Fe> generate_set(const PlaneContext& ctx, const GeneratorSpec& spec);

// One full pipeline run. Stages that fail turn into the terminal case;
// nothing below the failure is populated.
struct PipelineTrace {
    std::string kind;                   // "incidence" or "determined-lines"
    int terminal_case = 0;              // 1..5
    std::string reason;
    int stage_count = 0;                // setup / config / reduction phases ran

    // setup phase
    std::uint64_t point_count = 0;
    std::uint64_t line_count = 0;       // lines the pipeline started from
    std::uint64_t working_line_count = 0; // after the opening refinement
    std::uint64_t incidences = 0;       // I against the working lines
    std::uint64_t degree_level = 0;     // K
    std::uint64_t degree_class_size = 0;
    std::optional<std::uint64_t> richness_level;      // k (determined-lines runs)
    std::optional<std::uint64_t> richness_class_size;

    // exponent reports
    std::optional<double> n_scale;        // N = max(|P|, |L|)
    std::optional<double> mass_exponent_deficit;   // 3/2 - log(|P1|K)/log N
    std::optional<double> level_exponent_deficit;  // 1/2 - log K / log N
    std::optional<double> richness_mass_ratio;     // |L1| k^2 / |P|^2
    std::optional<double> reselect_ratio;          // |P1| K / (|L1| k)

    // raw case inequalities, evaluated with the realized sizes
    std::optional<bool> ineq_case1, ineq_case2, ineq_case3, ineq_case4;

    std::optional<TwoApexConfig> two_apex;
    std::optional<FourApexConfig> four_apex;
    std::optional<std::uint64_t> stripped_size;     // |core minus transversal|
    std::optional<std::uint64_t> transversal_hits;  // |core on transversal|
    std::optional<GridReduction> reduction;
    std::optional<PartialSumprodReport> grid_check;

    // determined-lines statistics
    std::optional<std::uint64_t> determined_lines;
    std::optional<std::uint64_t> max_collinear_count;
    std::optional<double> determined_exponent;      // log|L(P)| / log|P|
};

// Incidence pipeline: bounded line refinement, dyadic point class, the two
// configuration searches, projective reduction, grid ratio check. Never
// throws; failures terminate the trace with the matching case.
PipelineTrace run_incidence_pipeline(const PlaneContext& ctx, const PointSet& P,
                                     const LineSet& L);

// Determined-lines pipeline. DataError if |P| < 2.
PipelineTrace run_beck_pipeline(const PlaneContext& ctx, const PointSet& P);

ordered_json trace_json(const PipelineTrace& t);
ordered_json reduction_json(const GridReduction& r);
ordered_json rudnev_json(const RudnevReport& r);
ordered_json grid_check_json(const PartialSumprodReport& r);
ordered_json energy_json(const EnergyReport& r);
ordered_json half_bsg_json(const HalfBsgResult& r);

struct SweepOptions {
    GeneratorSpec base;                  // family, p, seed = master seed
    std::vector<std::uint64_t> sizes;
    std::uint64_t seeds_per_size = 1;
    std::string mode = "beck";           // beck | incidence | rudnev | halfbsg
    double eps = 0.01;
    int jobs = 1;
    bool timing = false;                 // adds wall_ms (breaks byte equality)
};

struct ExperimentRecord {
    std::string family;
    std::uint64_t p = 0;
    std::uint64_t size = 0;
    std::uint64_t seed = 0;              // derived per-instance seed
    bool ok = true;
    std::string error;
    std::optional<std::uint64_t> incidences;
    std::optional<std::uint64_t> determined_lines;
    std::optional<std::uint64_t> max_collinear_count;
    std::optional<int> terminal_case;
    std::optional<double> ratio_rudnev;
    std::optional<double> ratio_grid;
    std::optional<double> exponent;
    ordered_json full;
};

// One record per (size, seed index), in that order regardless of jobs.
// Per-record failures are captured in the record, never thrown.
std::vector<ExperimentRecord> sweep(const SweepOptions& opts);

std::string records_jsonl(const std::vector<ExperimentRecord>& recs);
std::string records_csv(const std::vector<ExperimentRecord>& recs);

} // namespace fpinc

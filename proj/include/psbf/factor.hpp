#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psbf/matrix.hpp"
#include "psbf/state.hpp"
#include "psbf/values.hpp"

namespace psbf {

struct FactorOptions {
    std::int32_t d = 0;
    double epsilon = 1.0 / 6.0;
    double tol = 1e-9;
    bool merge = false;
    std::int64_t max_iterations = 0;  // 0: n + N
    int threads = 1;
};

struct TraceRow {
    std::int32_t iteration = 0;
    std::int64_t extracted = 0;  // unmatched singletons this pass (p)
    std::int32_t eta = 0;
    double residual_fro = 0.0;
    std::int64_t wall_ms = 0;
};

struct FactorResult {
    BinaryColumnMatrix Ahat;
    SparseCodeMatrix Xhat;
    std::int32_t iterations = 0;
    std::int32_t eta_final = 0;
    bool hit_iteration_cap = false;
    std::vector<TraceRow> trace;
};

/// One residual column: group its values; groups occurring more than
/// (1-2eps)d times are singleton candidates and are matched against the
/// nonzero reconstruction columns (overlap >= 2*eps*d, argmax, lowest index on
/// ties) or else appended to the unmatched batch; smaller groups that equal an
/// already recovered code value OR their locations into that column. Returns
/// whether any reconstruction entry actually changed. mutate_encoder=false
/// suppresses encoder-side writes (the naive driver discards them).
bool extract_and_match(const SparseRealVector& r, FactorisationState& state, std::int32_t col,
                       const FactorOptions& opt, ExtractionBatch& out,
                       bool mutate_encoder = true);

/// Same, over pre-computed value groups (grouping is pure per column and may
/// run in parallel; the matching stays serial so results equal the serial
/// schedule).
bool extract_and_match_groups(const std::vector<ValueGroup>& groups, FactorisationState& state,
                              std::int32_t col, const FactorOptions& opt, ExtractionBatch& out,
                              bool mutate_encoder = true);

/// Greedy Gram clustering of the unmatched batch: each unassigned support
/// seeds a fresh column; later unassigned supports overlapping the seed by
/// >= 2*eps*d are OR-ed in and their singletons written to the seeded row.
bool cluster_and_add(const ExtractionBatch& batch, FactorisationState& state,
                     const FactorOptions& opt);

/// Largest-cluster-only variant: one new column per call.
bool maxcluster_and_add(const ExtractionBatch& batch, FactorisationState& state,
                        const FactorOptions& opt);

struct DecodeContext {
    std::vector<std::int32_t> complete;                    // columns with degree d
    std::vector<std::vector<std::int32_t>> row_complete;   // row -> complete columns
};
DecodeContext make_decode_context(const FactorisationState& state, std::int32_t d);

struct DecodeOutcome {
    bool updated = false;
    std::int32_t iterations = 0;  // passes that saw a nonzero residual
};

/// Peeling decode of one measurement column against the complete
/// reconstruction columns only: value groups occurring >= 2*eps*d times match
/// at overlap >= 2*eps*d; repeats until a pass changes nothing or the
/// residual is zero.
DecodeOutcome decode(std::span<const double> y, FactorisationState& state, std::int32_t col,
                     const FactorOptions& opt, const DecodeContext& ctx);
DecodeOutcome decode(std::span<const double> y, FactorisationState& state, std::int32_t col,
                     const FactorOptions& opt);

/// Duplicate-column cleanup for the epsilon-unknown mode: columns with
/// current degree >= d/3 whose pass-start overlap is >= d/3 are OR-merged,
/// their code rows summed, and the duplicate zeroed.
bool merge_pass(FactorisationState& state, std::int32_t d);

/// Full factorisation driver: extract over all residual columns, cluster the
/// unmatched batch, decode every measurement column, optionally merge, then
/// recompute the residual; stops when the residual is zero (entrywise
/// tol*max(1,|Y|)) or a pass changes nothing.
FactorResult debf_run(const DenseMatrix& Y, std::int32_t n, const FactorOptions& opt);

/// Naive largest-cluster driver used as an analytical reference: recovers at
/// most one encoder column per pass and stops as soon as a pass fails to
/// complete one.
FactorResult ndebf_run(const DenseMatrix& Y, std::int32_t n, const FactorOptions& opt);

}  // namespace psbf

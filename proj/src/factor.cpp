#include "psbf/factor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "psbf/kern.hpp"
#include "psbf/parallel.hpp"

namespace psbf {
namespace {

// Overlap counts accumulated through a row->columns index; cleared between
// uses via the touched list.
struct ScoreBoard {
    std::vector<std::int32_t> score;
    std::vector<std::int32_t> touched;

    void ensure(std::size_t n) {
        if (score.size() < n) score.resize(n, 0);
    }

    // Best-overlapping column for `rows`: max count, lowest index on ties.
    // Returns {-1, 0} when no column touches the rows.
    template <typename RowCols>
    std::pair<std::int32_t, std::int32_t> best(std::span<const std::int32_t> rows,
                                               RowCols&& cols_at_row) {
        for (std::int32_t r : rows)
            for (std::int32_t l : cols_at_row(r)) {
                if (score[std::size_t(l)] == 0) touched.push_back(l);
                ++score[std::size_t(l)];
            }
        std::int32_t kappa = -1, bestScore = 0;
        for (std::int32_t l : touched) {
            const std::int32_t s = score[std::size_t(l)];
            if (s > bestScore || (s == bestScore && l < kappa)) {
                bestScore = s;
                kappa = l;
            }
        }
        for (std::int32_t l : touched) score[std::size_t(l)] = 0;
        touched.clear();
        return {kappa, bestScore};
    }
};

thread_local ScoreBoard tls_scores;

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

void check_options(const FactorOptions& opt) {
    if (opt.d <= 0) throw std::invalid_argument("factor: d must be positive");
    if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0))
        throw std::invalid_argument("factor: epsilon must lie in (0,1)");
    if (!(opt.tol >= 0.0)) throw std::invalid_argument("factor: tol must be >= 0");
}

void check_input(const DenseMatrix& Y, std::int32_t n) {
    if (Y.rows <= 0 || Y.cols <= 0 || n <= 0) throw std::invalid_argument("factor: empty input");
    for (double v : Y.data)
        if (!std::isfinite(v)) throw std::invalid_argument("factor: Y must be finite");
}

bool residual_is_zero(const DenseMatrix& R, const DenseMatrix& Y, double tol) {
    return kern::active().all_within_scaled_tol(R.data.data(), Y.data.data(), R.data.size(), tol);
}

}  // namespace

bool extract_and_match_groups(const std::vector<ValueGroup>& groups, FactorisationState& state,
                              std::int32_t col, const FactorOptions& opt, ExtractionBatch& out,
                              bool mutate_encoder) {
    const double keep_threshold = (1.0 - 2.0 * opt.epsilon) * opt.d;
    const double match_threshold = 2.0 * opt.epsilon * opt.d;
    ScoreBoard& sb = tls_scores;
    sb.ensure(std::size_t(state.capacity()));

    bool changed = false;
    for (const ValueGroup& g : groups) {
        if (count_gt(g.count(), keep_threshold)) {
            auto [kappa, best] = sb.best(g.locations,
                                         [&](std::int32_t r) { return state.cols_at_row(r); });
            const bool fits = kappa < 0 || !mutate_encoder || state.union_fits(kappa, g.locations);
            if (kappa >= 0 && count_ge(best, match_threshold) && fits) {
                changed |= state.set_code(kappa, col, g.value) ==
                            FactorisationState::CodeWrite::Created;
                if (mutate_encoder) changed |= state.or_into_column(kappa, g.locations);
            } else {
                out.add(g.value, g.locations, col, state.rows());
            }
        } else {
            const SparseRealVector& xcol = state.code_column(col);
            for (std::size_t e = 0; e < xcol.nnz(); ++e) {
                if (approx_equal(g.value, xcol.val[e], opt.tol)) {
                    if (mutate_encoder && state.union_fits(xcol.idx[e], g.locations))
                        changed |= state.or_into_column(xcol.idx[e], g.locations);
                }
            }
        }
    }
    return changed;
}

bool extract_and_match(const SparseRealVector& r, FactorisationState& state, std::int32_t col,
                       const FactorOptions& opt, ExtractionBatch& out, bool mutate_encoder) {
    return extract_and_match_groups(group_values(r, opt.tol), state, col, opt, out,
                                    mutate_encoder);
}

namespace {

// Two partial supports of one d-sized column always intersect in at least
// |w1| + |w2| - d rows. Joining a member that violates this against any
// current cluster member is provably a cross-column error, so it is refused
// (never fires while the expander hypothesis holds).
bool pairwise_consistent(const ExtractionBatch& batch, const std::vector<std::size_t>& members,
                         std::size_t j, std::int32_t d) {
    if (d <= 0) return true;
    const std::int32_t wj = std::int32_t(batch.supports[j].rows.size());
    for (std::size_t m : members) {
        const std::int32_t wm = std::int32_t(batch.supports[m].rows.size());
        const std::int32_t need = wj + wm - d;
        if (need > 0 && overlap(batch.supports[j].bits, batch.supports[m].bits) < need)
            return false;
    }
    return true;
}

}  // namespace

bool cluster_and_add(const ExtractionBatch& batch, FactorisationState& state,
                     const FactorOptions& opt) {
    const double match_threshold = 2.0 * opt.epsilon * opt.d;
    const std::size_t p = batch.size();
    std::vector<char> assigned(p, 0);
    bool changed = false;
    const std::int32_t cap = state.degree_cap();
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < p; ++i) {
        if (assigned[i]) continue;
        if (!state.has_free_column()) break;  // off-model input; leftovers retry next pass
        if (cap > 0 && std::int32_t(batch.supports[i].rows.size()) > cap) continue;
        const std::int32_t l = state.new_column_from(batch.supports[i]);
        state.set_code(l, batch.origins[i], batch.values[i]);
        assigned[i] = 1;
        changed = true;
        members.assign(1, i);
        for (std::size_t j = i + 1; j < p; ++j) {
            if (assigned[j]) continue;
            if (!count_ge(overlap(batch.supports[i].bits, batch.supports[j].bits),
                          match_threshold))
                continue;
            if (!state.union_fits(l, batch.supports[j].rows)) continue;
            if (!pairwise_consistent(batch, members, j, cap)) continue;
            state.or_into_column(l, batch.supports[j].rows);
            state.set_code(l, batch.origins[j], batch.values[j]);
            assigned[j] = 1;
            members.push_back(j);
        }
    }
    return changed;
}

bool maxcluster_and_add(const ExtractionBatch& batch, FactorisationState& state,
                        const FactorOptions& opt) {
    const double match_threshold = 2.0 * opt.epsilon * opt.d;
    const std::size_t p = batch.size();
    if (p == 0) return false;

    const std::int32_t build_cap = state.degree_cap();
    std::vector<std::size_t> best_cluster, cluster;
    for (std::size_t i = 0; i < p; ++i) {
        if (build_cap > 0 && std::int32_t(batch.supports[i].rows.size()) > build_cap) continue;
        cluster.assign(1, i);
        PackedBits uni = batch.supports[i].bits;
        std::int32_t uni_size = std::int32_t(batch.supports[i].rows.size());
        for (std::size_t j = i + 1; j < p; ++j) {
            if (!count_ge(overlap(batch.supports[i].bits, batch.supports[j].bits),
                          match_threshold))
                continue;
            if (build_cap > 0) {
                const std::int32_t wj = std::int32_t(batch.supports[j].rows.size());
                if (uni_size + wj - overlap(uni, batch.supports[j].bits) > build_cap) continue;
                if (!pairwise_consistent(batch, cluster, j, build_cap)) continue;
            }
            cluster.push_back(j);
            for (std::size_t w = 0; w < uni.words.size(); ++w)
                uni.words[w] |= batch.supports[j].bits.words[w];
            uni_size = uni.popcount();
        }
        if (cluster.size() > best_cluster.size()) best_cluster = cluster;
    }
    if (best_cluster.empty()) return false;

    if (!state.has_free_column()) return false;
    const std::int32_t cap = state.degree_cap();
    std::int32_t l = -1;
    bool changed = false;
    for (std::size_t j : best_cluster) {
        if (l < 0) {
            if (cap > 0 && std::int32_t(batch.supports[j].rows.size()) > cap) continue;
            l = state.new_column_from(batch.supports[j]);
        } else {
            if (!state.union_fits(l, batch.supports[j].rows)) continue;
            state.or_into_column(l, batch.supports[j].rows);
        }
        state.set_code(l, batch.origins[j], batch.values[j]);
        changed = true;
    }
    return changed;
}

DecodeContext make_decode_context(const FactorisationState& state, std::int32_t d) {
    DecodeContext ctx;
    ctx.row_complete.resize(std::size_t(state.rows()));
    for (std::int32_t l = 0; l < state.capacity(); ++l) {
        if (state.degree(l) != d) continue;
        ctx.complete.push_back(l);
        for (std::int32_t r : state.support(l)) ctx.row_complete[std::size_t(r)].push_back(l);
    }
    return ctx;
}

DecodeOutcome decode(std::span<const double> y, FactorisationState& state, std::int32_t col,
                     const FactorOptions& opt, const DecodeContext& ctx) {
    const double threshold = 2.0 * opt.epsilon * opt.d;
    ScoreBoard& sb = tls_scores;
    sb.ensure(std::size_t(state.capacity()));
    std::vector<double> rbuf(y.size());

    DecodeOutcome out;
    const std::int32_t pass_cap = state.capacity() + 1;
    while (true) {
        residual_column(y, state.encoder(), state.code_column(col), rbuf);
        if (kern::active().all_within_scaled_tol(rbuf.data(), y.data(), y.size(), opt.tol)) break;
        if (out.iterations >= pass_cap) break;  // off-model inputs only
        ++out.iterations;

        bool progress = false;
        for (const ValueGroup& g : group_values(sparsify(rbuf, y, opt.tol), opt.tol)) {
            if (!count_ge(g.count(), threshold)) continue;
            auto [kappa, best] =
                sb.best(g.locations, [&](std::int32_t r) -> std::span<const std::int32_t> {
                    return ctx.row_complete[std::size_t(r)];
                });
            if (kappa >= 0 && count_ge(best, threshold)) {
                if (state.set_code(kappa, col, g.value) ==
                    FactorisationState::CodeWrite::Created) {
                    out.updated = true;
                    progress = true;
                }
            }
        }
        if (!progress) break;
    }
    return out;
}

DecodeOutcome decode(std::span<const double> y, FactorisationState& state, std::int32_t col,
                     const FactorOptions& opt) {
    DecodeContext ctx = make_decode_context(state, opt.d);
    return decode(y, state, col, opt, ctx);
}

bool merge_pass(FactorisationState& state, std::int32_t d) {
    const double threshold = double(d) / 3.0;
    const std::int32_t n = state.capacity();
    const std::int32_t m = state.rows();

    // Pass-start snapshot: the pairwise tests use the Gram of the columns as
    // they were when the pass began, while the unions act on current columns.
    std::vector<std::vector<std::int32_t>> snap(static_cast<std::size_t>(n));
    std::vector<std::vector<std::int32_t>> snap_rows(static_cast<std::size_t>(m));
    for (std::int32_t l = 0; l < n; ++l) {
        auto s = state.support(l);
        snap[std::size_t(l)].assign(s.begin(), s.end());
        for (std::int32_t r : s) snap_rows[std::size_t(r)].push_back(l);
    }

    ScoreBoard& sb = tls_scores;
    sb.ensure(static_cast<std::size_t>(n));
    bool any = false;
    std::vector<std::int32_t> partners;
    for (std::int32_t i = 0; i < n; ++i) {
        if (!count_ge(state.degree(i), threshold)) continue;
        partners.clear();
        for (std::int32_t r : snap[std::size_t(i)])
            for (std::int32_t l : snap_rows[std::size_t(r)]) {
                if (sb.score[std::size_t(l)] == 0) sb.touched.push_back(l);
                ++sb.score[std::size_t(l)];
            }
        for (std::int32_t l : sb.touched)
            if (l > i && count_ge(sb.score[std::size_t(l)], threshold)) partners.push_back(l);
        for (std::int32_t l : sb.touched) sb.score[std::size_t(l)] = 0;
        sb.touched.clear();
        std::sort(partners.begin(), partners.end());

        for (std::int32_t j : partners) {
            std::vector<std::int32_t> jrows(state.support(j).begin(), state.support(j).end());
            if (!state.union_fits(i, jrows)) continue;
            state.or_into_column(i, jrows);
            state.fold_row_into(i, j);
            state.zero_column(j);
            any = true;
        }
    }
    if (any) state.refresh_eta();
    return any;
}

FactorResult debf_run(const DenseMatrix& Y, std::int32_t n, const FactorOptions& opt) {
    check_options(opt);
    check_input(Y, n);
    const std::int32_t N = Y.cols;
    const int threads = resolve_threads(opt.threads);
    const std::int64_t cap =
        opt.max_iterations > 0 ? opt.max_iterations : std::int64_t(n) + std::int64_t(N);

    FactorisationState state(Y.rows, n, N, opt.d);
    DenseMatrix R = Y;
    DenseMatrix R_prev;
    FactorResult res;
    std::vector<std::vector<ValueGroup>> groups(static_cast<std::size_t>(N));
    std::vector<char> col_updated(std::size_t(N), 0);

    bool updated = true;
    bool rzero = residual_is_zero(R, Y, opt.tol);
    do {
        if (res.iterations >= cap) {
            res.hit_iteration_cap = true;
            break;
        }
        ++res.iterations;
        const auto t0 = std::chrono::steady_clock::now();
        bool changed = false;

        parallel_for(threads, 0, N, [&](std::int64_t i) {
            groups[std::size_t(i)] = group_values(
                sparsify(std::span(R.col(std::int32_t(i)), std::size_t(R.rows)),
                         std::span(Y.col(std::int32_t(i)), std::size_t(Y.rows)), opt.tol),
                opt.tol);
        });

        ExtractionBatch batch;
        for (std::int32_t i = 0; i < N; ++i)
            changed |= extract_and_match_groups(groups[std::size_t(i)], state, i, opt, batch);
        const std::int64_t p = std::int64_t(batch.size());
        if (p > 0) changed |= cluster_and_add(batch, state, opt);

        const DecodeContext ctx = make_decode_context(state, opt.d);
        parallel_for(threads, 0, N, [&](std::int64_t i) {
            col_updated[std::size_t(i)] =
                decode(std::span(Y.col(std::int32_t(i)), std::size_t(Y.rows)), state,
                       std::int32_t(i), opt, ctx)
                    .updated
                    ? 1
                    : 0;
        });
        for (std::int32_t i = 0; i < N; ++i) changed |= (col_updated[std::size_t(i)] != 0);

        if (opt.merge) changed |= merge_pass(state, opt.d);

        R_prev = std::move(R);
        R = residual(Y, state.encoder(), state.code());
        rzero = residual_is_zero(R, Y, opt.tol);
        // Exit as soon as the residual stops moving: entry rewrites inside a
        // pass can cancel out on degenerate inputs, so the reconstruction
        // flag alone would spin.
        updated = changed && R.data != R_prev.data;
        res.trace.push_back({res.iterations, p, state.eta(),
                             std::sqrt(kern::active().frobenius_sq(R.data.data(), R.data.size())),
                             elapsed_ms(t0)});
    } while (!rzero && updated);

    res.eta_final = state.eta();
    res.Ahat = state.take_encoder();
    res.Xhat = state.take_code();
    return res;
}

FactorResult ndebf_run(const DenseMatrix& Y, std::int32_t n, const FactorOptions& opt) {
    check_options(opt);
    check_input(Y, n);
    const std::int32_t N = Y.cols;
    const int threads = resolve_threads(opt.threads);
    const std::int64_t cap =
        opt.max_iterations > 0 ? opt.max_iterations : std::int64_t(n) + std::int64_t(N);

    FactorisationState state(Y.rows, n, N, opt.d);
    DenseMatrix R = Y;
    FactorResult res;
    std::vector<std::vector<ValueGroup>> groups(static_cast<std::size_t>(N));

    std::int32_t completed = 0;
    bool run = true;
    while (completed < n && run) {
        if (res.iterations >= cap) {
            res.hit_iteration_cap = true;
            break;
        }
        ++res.iterations;
        const auto t0 = std::chrono::steady_clock::now();

        parallel_for(threads, 0, N, [&](std::int64_t i) {
            groups[std::size_t(i)] = group_values(
                sparsify(std::span(R.col(std::int32_t(i)), std::size_t(R.rows)),
                         std::span(Y.col(std::int32_t(i)), std::size_t(Y.rows)), opt.tol),
                opt.tol);
        });

        // Encoder-side updates from extraction are discarded here; only the
        // code entries matched against complete columns are kept.
        ExtractionBatch batch;
        for (std::int32_t i = 0; i < N; ++i)
            extract_and_match_groups(groups[std::size_t(i)], state, i, opt, batch,
                                     /*mutate_encoder=*/false);

        const std::int64_t p = std::int64_t(batch.size());
        if (p > 0) {
            const std::int32_t idx = state.eta();
            maxcluster_and_add(batch, state, opt);
            if (state.degree(idx) == opt.d) {
                const DecodeContext ctx = make_decode_context(state, opt.d);
                parallel_for(threads, 0, N, [&](std::int64_t i) {
                    decode(std::span(Y.col(std::int32_t(i)), std::size_t(Y.rows)), state,
                           std::int32_t(i), opt, ctx);
                });
                R = residual(Y, state.encoder(), state.code());
                completed = idx + 1;
            } else {
                run = false;
            }
        } else {
            run = false;
        }
        res.trace.push_back({res.iterations, p, state.eta(),
                             std::sqrt(kern::active().frobenius_sq(R.data.data(), R.data.size())),
                             elapsed_ms(t0)});
    }

    res.eta_final = completed;
    res.Ahat = state.take_encoder();
    res.Xhat = state.take_code();
    return res;
}

}  // namespace psbf

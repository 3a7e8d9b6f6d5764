#include "psbf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "psbf/kern.hpp"
#include "psbf/model.hpp"
#include "psbf/parallel.hpp"
#include "psbf/rng.hpp"
#include "psbf/verify.hpp"

namespace psbf {
namespace {

FactorOptions options_for(const TrialConfig& c) {
    FactorOptions opt;
    opt.d = c.d;
    opt.tol = c.tol;
    opt.threads = 1;  // grids parallelise across trials
    if (c.mode == EpsilonMode::Practical) {
        opt.epsilon = 1.0 / 6.0;
        opt.merge = true;
    } else {
        opt.epsilon = c.epsilon;
        opt.merge = false;
    }
    return opt;
}

}  // namespace

TrialResult run_trial(const TrialConfig& config) {
    PsbParams params;
    params.d = config.d;
    params.k = config.k;
    params.m = config.m;
    params.n = config.n;
    params.N = config.N;
    params.coeff_low = config.coeff_low;
    params.coeff_high = config.coeff_high;
    params.seed = config.seed;
    const PsbInstance inst = sample_instance(params);

    const auto t0 = std::chrono::steady_clock::now();
    const FactorResult res = debf_run(inst.Y, config.n, options_for(config));
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

    TrialResult out;
    out.iterations = res.iterations;
    out.wall_ms = wall;
    const double y_fro = inst.Y.frobenius();
    double r_fro;
    if (!res.trace.empty()) {
        r_fro = res.trace.back().residual_fro;
    } else {
        r_fro = residual(inst.Y, res.Ahat, res.Xhat).frobenius();
    }
    out.residual_pct = y_fro > 0.0 ? 100.0 * r_fro / y_fro : 0.0;
    try {
        out.exact = match_up_to_permutation(res.Ahat, res.Xhat, inst.A, inst.X, config.tol).exact;
    } catch (const AmbiguousContainment&) {
        out.exact = false;
    }
    return out;
}

std::vector<GridCell> run_grid_cells(const GridSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("grid: trials must be >= 1");
    if (spec.k_values.empty() || spec.N_values.empty())
        throw std::invalid_argument("grid: empty parameter lists");

    struct Task {
        std::int32_t k, N, trial;
    };
    std::vector<Task> tasks;
    for (std::int32_t k : spec.k_values)
        for (std::int32_t N : spec.N_values)
            for (std::int32_t t = 0; t < spec.trials; ++t) tasks.push_back({k, N, t});

    std::vector<TrialResult> results(tasks.size());
    const int threads = resolve_threads(spec.threads);
    parallel_for(threads, 0, std::int64_t(tasks.size()), [&](std::int64_t i) {
        const Task& task = tasks[std::size_t(i)];
        TrialConfig c;
        c.d = spec.d;
        c.k = task.k;
        c.m = spec.m;
        c.n = spec.n;
        c.N = task.N;
        c.mode = spec.mode;
        c.epsilon = spec.epsilon;
        c.tol = spec.tol;
        c.seed = derive_seed(spec.master_seed, std::uint64_t(task.k), std::uint64_t(task.N),
                             std::uint64_t(task.trial));
        try {
            results[std::size_t(i)] = run_trial(c);
        } catch (const std::exception&) {
            // Recorded as a failed trial; the grid carries on.
            results[std::size_t(i)] = TrialResult{100.0, 0, false, 0};
        }
    });

    std::vector<GridCell> cells;
    std::size_t idx = 0;
    for (std::int32_t k : spec.k_values)
        for (std::int32_t N : spec.N_values) {
            GridCell cell;
            cell.k = k;
            cell.N = N;
            cell.k_over_n_pct = 100.0 * double(k) / double(spec.n);
            for (std::int32_t t = 0; t < spec.trials; ++t, ++idx) {
                const TrialResult& r = results[idx];
                cell.mean_residual_pct += r.residual_pct;
                cell.mean_iterations += r.iterations;
                cell.mean_wall_ms += double(r.wall_ms);
                if (r.exact) ++cell.exact_count;
            }
            cell.mean_residual_pct /= spec.trials;
            cell.mean_iterations /= spec.trials;
            cell.mean_wall_ms /= spec.trials;
            cells.push_back(cell);
        }
    return cells;
}

void run_grid(const GridSpec& spec, std::ostream& csv) {
    const std::vector<GridCell> cells = run_grid_cells(spec);
    csv << "k,N,k_over_n_pct,mean_residual_pct,mean_iterations,exact_count,mean_wall_ms\n";
    char line[192];
    for (const GridCell& c : cells) {
        const double wall = spec.include_timing ? c.mean_wall_ms : 0.0;
        std::snprintf(line, sizeof line, "%d,%d,%.2f,%.6f,%.2f,%d,%.3f\n", c.k, c.N,
                      c.k_over_n_pct, c.mean_residual_pct, c.mean_iterations, c.exact_count,
                      wall);
        csv << line;
    }
}

StreamSession::StreamSession(std::int32_t m, StreamOptions opt)
    : opt_(opt),
      Y_(m, 0),
      state_(m, opt.expected_n > 0 ? opt.expected_n : 16, 0, opt.d) {
    if (opt_.d <= 0) throw std::invalid_argument("stream: d must be positive");
    if (m <= 0) throw std::invalid_argument("stream: m must be positive");
}

std::int32_t StreamSession::complete_columns() const {
    std::int32_t count = 0;
    for (std::int32_t l = 0; l < state_.capacity(); ++l)
        if (state_.degree(l) == opt_.d) ++count;
    return count;
}

void StreamSession::ingest(std::span<const double> column) {
    if (std::int32_t(column.size()) != Y_.rows)
        throw std::invalid_argument("stream: column has wrong dimension");
    Y_.data.insert(Y_.data.end(), column.begin(), column.end());
    ++Y_.cols;
    state_.append_code_columns(1);

    if (stabilised_) {
        FactorOptions fo{opt_.d, opt_.epsilon, opt_.tol, false, 0, 1};
        decode(std::span(Y_.col(Y_.cols - 1), std::size_t(Y_.rows)), state_, Y_.cols - 1, fo);
        ++decode_calls_;
        return;
    }
    run_warm_passes();
}

void StreamSession::ingest(const DenseMatrix& columns) {
    if (columns.cols == 0) return;
    if (columns.rows != Y_.rows) throw std::invalid_argument("stream: batch has wrong dimension");
    if (stabilised_) {
        for (std::int32_t c = 0; c < columns.cols; ++c)
            ingest(std::span(columns.col(c), std::size_t(columns.rows)));
        return;
    }
    Y_.data.insert(Y_.data.end(), columns.data.begin(), columns.data.end());
    Y_.cols += columns.cols;
    state_.append_code_columns(columns.cols);
    run_warm_passes();
}

void StreamSession::run_warm_passes() {
    FactorOptions fo{opt_.d, opt_.epsilon, opt_.tol, opt_.merge, 0, 1};
    const std::int32_t N = Y_.cols;
    const int threads = resolve_threads(opt_.threads);

    DenseMatrix R_prev;
    while (true) {
        DenseMatrix R = residual(Y_, state_.encoder(), state_.code());
        if (kern::active().all_within_scaled_tol(R.data.data(), Y_.data.data(), R.data.size(),
                                                 opt_.tol))
            break;
        if (R.data == R_prev.data) break;  // residual fixed point
        ++passes_;
        bool changed = false;

        std::vector<std::vector<ValueGroup>> groups(static_cast<std::size_t>(N));
        parallel_for(threads, 0, N, [&](std::int64_t i) {
            groups[std::size_t(i)] = group_values(
                sparsify(std::span(R.col(std::int32_t(i)), std::size_t(R.rows)),
                         std::span(Y_.col(std::int32_t(i)), std::size_t(Y_.rows)), opt_.tol),
                opt_.tol);
        });
        ExtractionBatch batch;
        for (std::int32_t i = 0; i < N; ++i)
            changed |= extract_and_match_groups(groups[std::size_t(i)], state_, i, fo, batch);

        if (batch.size() > 0) {
            if (opt_.expected_n == 0) {
                const std::int32_t need = state_.eta() + std::int32_t(batch.size());
                if (need > state_.capacity())
                    state_.grow_capacity(std::max(need, state_.capacity() * 2));
            }
            ++cluster_calls_;
            changed |= cluster_and_add(batch, state_, fo);
        }

        const DecodeContext ctx = make_decode_context(state_, opt_.d);
        std::vector<char> col_updated(std::size_t(N), 0);
        parallel_for(threads, 0, N, [&](std::int64_t i) {
            col_updated[std::size_t(i)] =
                decode(std::span(Y_.col(std::int32_t(i)), std::size_t(Y_.rows)), state_,
                       std::int32_t(i), fo, ctx)
                    .updated
                    ? 1
                    : 0;
        });
        decode_calls_ += N;
        for (std::int32_t i = 0; i < N; ++i) changed |= (col_updated[std::size_t(i)] != 0);

        if (opt_.merge) changed |= merge_pass(state_, opt_.d);
        if (!changed) break;
        R_prev = std::move(R);
    }

    if (opt_.expected_n > 0 && complete_columns() == opt_.expected_n) stabilised_ = true;
}

FactorResult StreamSession::snapshot() const {
    FactorResult res;
    res.Ahat = state_.encoder();
    res.Xhat = state_.code();
    res.iterations = passes_;
    res.eta_final = state_.eta();
    return res;
}

}  // namespace psbf

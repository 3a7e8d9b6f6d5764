#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "psbf/factor.hpp"
#include "psbf/matrix.hpp"
#include "psbf/state.hpp"

namespace psbf {

/// Known: run with the caller's epsilon, no merge. Practical: epsilon = 1/6
/// plus the duplicate-merge pass each iteration.
enum class EpsilonMode { Known, Practical };

struct TrialConfig {
    std::int32_t d = 0, k = 0, m = 0, n = 0, N = 0;
    std::uint64_t seed = 0;
    EpsilonMode mode = EpsilonMode::Practical;
    double epsilon = 1.0 / 6.0;  // used in Known mode
    double tol = 1e-9;
    double coeff_low = 0.1, coeff_high = 10.1;
};

struct TrialResult {
    double residual_pct = 0.0;  // 100 * ||Y - Ahat Xhat||_F / ||Y||_F
    std::int32_t iterations = 0;
    bool exact = false;
    std::int64_t wall_ms = 0;
};

/// One seeded instance through the factorisation driver, measured against its
/// own ground truth.
TrialResult run_trial(const TrialConfig& config);

struct GridSpec {
    std::int32_t d = 0, m = 0, n = 0;
    std::vector<std::int32_t> k_values, N_values;
    std::int32_t trials = 10;
    std::uint64_t master_seed = 0;
    EpsilonMode mode = EpsilonMode::Practical;
    double epsilon = 1.0 / 6.0;
    double tol = 1e-9;
    int threads = 0;            // 0: hardware concurrency (env-capped)
    bool include_timing = true; // false: wall columns print 0 so output is seed-pure
};

struct GridCell {
    std::int32_t k = 0, N = 0;
    double k_over_n_pct = 0.0;
    double mean_residual_pct = 0.0;
    double mean_iterations = 0.0;
    std::int32_t exact_count = 0;
    double mean_wall_ms = 0.0;
};

/// Every (k, N) cell averaged over `trials` seeded instances. Trial seeds are
/// derive_seed(master, k, N, trial), so cells are independent and
/// individually re-runnable; trials run concurrently but aggregate in order.
std::vector<GridCell> run_grid_cells(const GridSpec& spec);

/// CSV: k,N,k_over_n_pct,mean_residual_pct,mean_iterations,exact_count,mean_wall_ms.
void run_grid(const GridSpec& spec, std::ostream& csv);

struct StreamOptions {
    std::int32_t d = 0;
    double epsilon = 1.0 / 6.0;
    double tol = 1e-9;
    std::int32_t expected_n = 0;  // 0: reconstruction capacity grows on demand
    bool merge = false;
    int threads = 1;
};

/// Online ingest: every batch is appended to the retained measurement set and
/// warm-started factorisation passes run until quiescent. Once expected_n
/// complete columns exist, later columns are decoded directly with no further
/// clustering work.
class StreamSession {
  public:
    StreamSession(std::int32_t m, StreamOptions opt);

    void ingest(std::span<const double> column);
    void ingest(const DenseMatrix& columns);

    bool stabilised() const { return stabilised_; }
    std::int32_t columns_seen() const { return Y_.cols; }
    std::int64_t cluster_calls() const { return cluster_calls_; }
    std::int64_t decode_calls() const { return decode_calls_; }
    std::int32_t passes() const { return passes_; }

    const BinaryColumnMatrix& encoder() const { return state_.encoder(); }
    const SparseCodeMatrix& code() const { return state_.code(); }
    const DenseMatrix& retained() const { return Y_; }

    /// Current factors and residual norm as a FactorResult snapshot.
    FactorResult snapshot() const;

  private:
    void run_warm_passes();
    std::int32_t complete_columns() const;

    StreamOptions opt_;
    DenseMatrix Y_;
    FactorisationState state_;
    bool stabilised_ = false;
    std::int64_t cluster_calls_ = 0;
    std::int64_t decode_calls_ = 0;
    std::int32_t passes_ = 0;
};

}  // namespace psbf

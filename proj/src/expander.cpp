#include "psbf/expander.hpp"

#include <stdexcept>

#include "psbf/values.hpp"

namespace psbf {
namespace {

std::int32_t regular_degree(const BinaryColumnMatrix& A) {
    if (A.cols == 0) throw std::invalid_argument("expander check: empty matrix");
    std::int32_t d = A.degree(0);
    for (std::int32_t l = 1; l < A.cols; ++l)
        if (A.degree(l) != d) throw std::invalid_argument("expander check: matrix is not left d-regular");
    if (d == 0) throw std::invalid_argument("expander check: zero columns");
    return d;
}

void check_guard(const BinaryColumnMatrix& A, std::int32_t k, const EnumerationGuard& g) {
    if (k < 1) throw std::invalid_argument("expander check: k must be >= 1");
    if (A.cols > g.max_cols || k > g.max_set)
        throw std::invalid_argument("expander check: instance above enumeration guard");
}

// Row incidence counters for one subset, reset by stamping.
struct RowCounter {
    std::vector<std::int32_t> count;
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;

    explicit RowCounter(std::int32_t m) : count(std::size_t(m), 0), stamp(std::size_t(m), 0) {}

    void begin() { ++epoch; }
    void add(std::int32_t row) {
        if (stamp[std::size_t(row)] != epoch) {
            stamp[std::size_t(row)] = epoch;
            count[std::size_t(row)] = 0;
        }
        ++count[std::size_t(row)];
    }
    std::int32_t at(std::int32_t row) const {
        return stamp[std::size_t(row)] == epoch ? count[std::size_t(row)] : 0;
    }
};

struct SubsetStats {
    std::int32_t neighbours;         // |N(S)|
    std::int32_t unique_neighbours;  // |N1(S)|
    std::int32_t joint_overlap;      // |intersection of supports|
};

template <typename Fn>
void for_each_subset(std::int32_t n, std::int32_t k, Fn&& fn) {
    std::vector<std::int32_t> chosen;
    auto recurse = [&](auto&& self, std::int32_t start) -> void {
        if (!chosen.empty()) fn(std::span<const std::int32_t>(chosen));
        if (std::int32_t(chosen.size()) == k) return;
        for (std::int32_t c = start; c < n; ++c) {
            chosen.push_back(c);
            self(self, c + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
}

SubsetStats subset_stats(const BinaryColumnMatrix& A, std::span<const std::int32_t> S,
                         RowCounter& rc) {
    rc.begin();
    std::vector<std::int32_t> touched;
    for (std::int32_t l : S)
        for (std::int32_t row : A.support(l)) {
            if (rc.at(row) == 0) touched.push_back(row);
            rc.add(row);
        }
    SubsetStats st{0, 0, 0};
    st.neighbours = std::int32_t(touched.size());
    const std::int32_t s = std::int32_t(S.size());
    for (std::int32_t row : touched) {
        std::int32_t c = rc.at(row);
        if (c == 1) ++st.unique_neighbours;
        if (c == s) ++st.joint_overlap;
    }
    return st;
}

}  // namespace

ExpansionReport expansion_oracle(const BinaryColumnMatrix& A, std::int32_t k,
                                 const EnumerationGuard& guard) {
    check_guard(A, k, guard);
    const std::int32_t d = regular_degree(A);
    RowCounter rc(A.rows);
    ExpansionReport report;
    report.k = k;
    report.epsilon_hat = -1.0;
    for_each_subset(A.cols, k, [&](std::span<const std::int32_t> S) {
        SubsetStats st = subset_stats(A, S, rc);
        double eps = 1.0 - double(st.neighbours) / (double(d) * double(S.size()));
        if (eps > report.epsilon_hat) {
            report.epsilon_hat = eps;
            report.worst_set.assign(S.begin(), S.end());
        }
    });
    return report;
}

std::int32_t unique_neighbour_count(const BinaryColumnMatrix& A,
                                    std::span<const std::int32_t> S) {
    RowCounter rc(A.rows);
    return subset_stats(A, S, rc).unique_neighbours;
}

bool overlap_bound_check(const BinaryColumnMatrix& A, double epsilon, std::int32_t k,
                         const EnumerationGuard& guard) {
    check_guard(A, k, guard);
    const std::int32_t d = regular_degree(A);
    RowCounter rc(A.rows);
    bool ok = true;
    for_each_subset(A.cols, k, [&](std::span<const std::int32_t> S) {
        if (!ok) return;
        SubsetStats st = subset_stats(A, S, rc);
        const double ds = double(d) * double(S.size());
        if (!count_gt(st.neighbours, (1.0 - epsilon) * ds)) ok = false;
        if (!count_gt(st.unique_neighbours, (1.0 - 2.0 * epsilon) * ds)) ok = false;
        if (S.size() >= 2 && !count_lt(st.joint_overlap, 2.0 * epsilon * d)) ok = false;
    });
    return ok;
}

bool is_expander_at(const BinaryColumnMatrix& A, double epsilon, std::int32_t k,
                    const EnumerationGuard& guard) {
    check_guard(A, k, guard);
    const std::int32_t d = regular_degree(A);
    RowCounter rc(A.rows);
    bool ok = true;
    for_each_subset(A.cols, k, [&](std::span<const std::int32_t> S) {
        if (!ok) return;
        SubsetStats st = subset_stats(A, S, rc);
        if (!count_gt(st.neighbours, (1.0 - epsilon) * double(d) * double(S.size()))) ok = false;
    });
    return ok;
}

}  // namespace psbf

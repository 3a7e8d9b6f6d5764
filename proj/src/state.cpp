#include "psbf/state.hpp"

#include <algorithm>
#include <stdexcept>

namespace psbf {

FactorisationState::FactorisationState(std::int32_t m, std::int32_t n, std::int32_t N,
                                       std::int32_t degree_cap)
    : ahat_(m, n),
      xhat_(n, N),
      row_cols_(std::size_t(m)),
      degree_cap_(degree_cap) {}

std::int32_t FactorisationState::fresh_rows(std::int32_t l, std::span<const std::int32_t> rows,
                                            std::vector<std::int32_t>& out) const {
    const auto& support = ahat_.supports[std::size_t(l)];
    out.clear();
    std::set_difference(rows.begin(), rows.end(), support.begin(), support.end(),
                        std::back_inserter(out));
    return std::int32_t(out.size());
}

bool FactorisationState::union_fits(std::int32_t l, std::span<const std::int32_t> rows) const {
    if (degree_cap_ <= 0) return true;
    std::vector<std::int32_t> fresh;
    return degree(l) + fresh_rows(l, rows, fresh) <= degree_cap_;
}

bool FactorisationState::or_into_column(std::int32_t l, std::span<const std::int32_t> rows) {
    std::vector<std::int32_t> fresh;
    fresh_rows(l, rows, fresh);
    if (fresh.empty()) return false;
    auto& support = ahat_.supports[std::size_t(l)];
    if (degree_cap_ > 0 && std::int32_t(support.size() + fresh.size()) > degree_cap_)
        throw std::logic_error("factorisation state: update exceeds the degree cap");
    const std::size_t mid = support.size();
    support.insert(support.end(), fresh.begin(), fresh.end());
    std::inplace_merge(support.begin(), support.begin() + std::ptrdiff_t(mid), support.end());
    for (std::int32_t r : fresh) row_cols_[std::size_t(r)].push_back(l);
    return true;
}

std::int32_t FactorisationState::new_column_from(const PartialSupport& w) {
    if (!has_free_column()) throw std::runtime_error("factorisation state: no free column left");
    if (degree_cap_ > 0 && std::int32_t(w.rows.size()) > degree_cap_)
        throw std::logic_error("factorisation state: seed exceeds the degree cap");
    const std::int32_t l = eta_;
    ahat_.supports[std::size_t(l)] = w.rows;
    for (std::int32_t r : w.rows) row_cols_[std::size_t(r)].push_back(l);
    advance_eta();
    return l;
}

FactorisationState::CodeWrite FactorisationState::set_code(std::int32_t row, std::int32_t col,
                                                           double v) {
    SparseRealVector& c = xhat_.columns[std::size_t(col)];
    auto it = std::lower_bound(c.idx.begin(), c.idx.end(), row);
    const std::size_t pos = std::size_t(it - c.idx.begin());
    if (it != c.idx.end() && *it == row) {
        if (c.val[pos] == v) return CodeWrite::None;
        c.val[pos] = v;
        return CodeWrite::Modified;
    }
    c.idx.insert(it, row);
    c.val.insert(c.val.begin() + std::ptrdiff_t(pos), v);
    return CodeWrite::Created;
}

void FactorisationState::fold_row_into(std::int32_t dst, std::int32_t src) {
    for (std::int32_t c = 0; c < xhat_.cols; ++c) {
        SparseRealVector& col = xhat_.columns[std::size_t(c)];
        auto it = std::lower_bound(col.idx.begin(), col.idx.end(), src);
        if (it == col.idx.end() || *it != src) continue;
        const std::size_t pos = std::size_t(it - col.idx.begin());
        const double v = col.val[pos];
        col.idx.erase(it);
        col.val.erase(col.val.begin() + std::ptrdiff_t(pos));
        auto dit = std::lower_bound(col.idx.begin(), col.idx.end(), dst);
        const std::size_t dpos = std::size_t(dit - col.idx.begin());
        if (dit != col.idx.end() && *dit == dst) {
            col.val[dpos] += v;
            if (col.val[dpos] == 0.0) {
                col.idx.erase(dit);
                col.val.erase(col.val.begin() + std::ptrdiff_t(dpos));
            }
        } else {
            col.idx.insert(dit, dst);
            col.val.insert(col.val.begin() + std::ptrdiff_t(dpos), v);
        }
    }
}

void FactorisationState::zero_column(std::int32_t l) {
    auto& support = ahat_.supports[std::size_t(l)];
    for (std::int32_t r : support) {
        auto& cols = row_cols_[std::size_t(r)];
        cols.erase(std::remove(cols.begin(), cols.end(), l), cols.end());
    }
    support.clear();
}

void FactorisationState::refresh_eta() {
    eta_ = 0;
    while (eta_ < ahat_.cols && ahat_.degree(eta_) > 0) ++eta_;
}

void FactorisationState::advance_eta() {
    ++eta_;
    while (eta_ < ahat_.cols && ahat_.degree(eta_) > 0) ++eta_;
}

void FactorisationState::grow_capacity(std::int32_t new_cols) {
    if (new_cols <= ahat_.cols) return;
    ahat_.supports.resize(static_cast<std::size_t>(new_cols));
    ahat_.cols = new_cols;
    xhat_.rows = new_cols;
    for (auto& col : xhat_.columns) col.dim = new_cols;
}

void FactorisationState::append_code_columns(std::int32_t count) {
    for (std::int32_t i = 0; i < count; ++i)
        xhat_.columns.emplace_back(SparseRealVector(xhat_.rows));
    xhat_.cols += count;
}

std::vector<bool> FactorisationState::nonzero_code_rows() const {
    std::vector<bool> nz(std::size_t(xhat_.rows), false);
    for (const auto& col : xhat_.columns)
        for (std::int32_t r : col.idx) nz[std::size_t(r)] = true;
    return nz;
}

}  // namespace psbf

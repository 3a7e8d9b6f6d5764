#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psbf/matrix.hpp"

namespace psbf {

/// One unmatched singleton extraction: the value, the rows it occupied, and
/// the residual column it came from.
struct PartialSupport {
    std::vector<std::int32_t> rows;  // sorted
    PackedBits bits;
};

struct ExtractionBatch {
    std::vector<double> values;             // q
    std::vector<PartialSupport> supports;   // W
    std::vector<std::int32_t> origins;      // h

    std::size_t size() const { return values.size(); }
    void clear() {
        values.clear();
        supports.clear();
        origins.clear();
    }
    void add(double value, std::vector<std::int32_t> rows, std::int32_t origin, std::int32_t m) {
        PartialSupport w;
        w.bits = PackedBits::from_sorted(rows, m);
        w.rows = std::move(rows);
        values.push_back(value);
        supports.push_back(std::move(w));
        origins.push_back(origin);
    }
};

/// Reconstruction pair (Ahat, Xhat) plus the row->column incidence index the
/// matching steps need. eta is the smallest zero-column index. All mutation
/// goes through methods so the support lists, the incidence index and eta
/// stay consistent. set_code on distinct columns is safe from distinct
/// threads; everything else is serial.
class FactorisationState {
  public:
    /// degree_cap > 0 bounds every column support at that cardinality (the
    /// encoder's d): a reconstruction column is a partial support of one true
    /// column, so any update pushing it past d is provably wrong and callers
    /// must reject it. 0 disables the bound.
    FactorisationState(std::int32_t m, std::int32_t n, std::int32_t N,
                       std::int32_t degree_cap = 0);

    const BinaryColumnMatrix& encoder() const { return ahat_; }
    const SparseCodeMatrix& code() const { return xhat_; }
    std::int32_t rows() const { return ahat_.rows; }
    std::int32_t capacity() const { return ahat_.cols; }
    std::int32_t eta() const { return eta_; }
    bool has_free_column() const { return eta_ < ahat_.cols; }

    std::int32_t degree(std::int32_t l) const { return ahat_.degree(l); }
    std::span<const std::int32_t> support(std::int32_t l) const { return ahat_.support(l); }
    std::span<const std::int32_t> cols_at_row(std::int32_t r) const {
        return row_cols_[std::size_t(r)];
    }
    const SparseRealVector& code_column(std::int32_t c) const {
        return xhat_.columns[std::size_t(c)];
    }

    /// Whether OR-ing rows into column l stays within the degree cap.
    bool union_fits(std::int32_t l, std::span<const std::int32_t> rows) const;

    /// OR rows into column l; returns whether the support grew.
    bool or_into_column(std::int32_t l, std::span<const std::int32_t> rows);

    /// Seed a fresh column at eta from w; returns its index and advances eta.
    std::int32_t new_column_from(const PartialSupport& w);

    std::int32_t degree_cap() const { return degree_cap_; }

    enum class CodeWrite { None, Modified, Created };

    /// Xhat(row, col) = v. Created is the progress signal the drivers track;
    /// a Modified write (same entry, different value) is applied but cannot
    /// occur while the expander hypothesis holds.
    CodeWrite set_code(std::int32_t row, std::int32_t col, double v);

    /// Merge support: Xhat row dst += row src, then row src and column src zeroed.
    void fold_row_into(std::int32_t dst, std::int32_t src);
    void zero_column(std::int32_t l);
    void refresh_eta();

    /// Extra zero columns for streaming ingest with unknown n.
    void grow_capacity(std::int32_t new_cols);

    /// Extra code columns for newly ingested measurement columns.
    void append_code_columns(std::int32_t count);

    /// Xhat row has any nonzero entry (computed on demand).
    std::vector<bool> nonzero_code_rows() const;

    /// Move the factors out once a run is finished.
    BinaryColumnMatrix take_encoder() { return std::move(ahat_); }
    SparseCodeMatrix take_code() { return std::move(xhat_); }

  private:
    BinaryColumnMatrix ahat_;
    SparseCodeMatrix xhat_;
    std::vector<std::vector<std::int32_t>> row_cols_;
    std::int32_t eta_ = 0;
    std::int32_t degree_cap_ = 0;

    void advance_eta();
    std::int32_t fresh_rows(std::int32_t l, std::span<const std::int32_t> rows,
                            std::vector<std::int32_t>& out) const;
};

}  // namespace psbf

#include "detk/linalg.hpp"

#include <algorithm>

namespace detk::la {

DenseMat::DenseMat(CoeffField field, int rows, int cols)
    : field_(field), rows_(rows), cols_(cols),
      data_(std::size_t(rows) * cols, field.zero()) {
    require(rows >= 0 && cols >= 0, "negative matrix dimension");
}

DenseMat DenseMat::identity(const CoeffField& field, int n) {
    DenseMat m(field, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, field.one());
    return m;
}

DenseMat DenseMat::multiply(const DenseMat& o) const {
    require(cols_ == o.rows_, "dimension mismatch in matrix product: ", cols_, " vs ", o.rows_);
    DenseMat r(field_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const FieldElem& a = at(i, k);
            if (field_.is_zero(a)) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const FieldElem& b = o.at(k, j);
                if (field_.is_zero(b)) continue;
                r.set(i, j, field_.add(r.at(i, j), field_.mul(a, b)));
            }
        }
    return r;
}

DenseMat DenseMat::transpose() const {
    DenseMat r(field_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
    return r;
}

bool DenseMat::is_zero() const {
    for (const auto& v : data_)
        if (!field_.is_zero(v)) return false;
    return true;
}

namespace {

// In-place reduced row echelon form; returns pivot columns (increasing).
// Pivot choice: scan columns left to right, take the first row with a
// nonzero entry (lowest row index among the unused).
std::vector<int> rref_inplace(const CoeffField& f, int rows, int cols,
                              std::vector<FieldElem>& a) {
    auto at = [&](int i, int j) -> FieldElem& { return a[std::size_t(i) * cols + j]; };
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (!f.is_zero(at(i, c))) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < cols; ++j) std::swap(at(pr, j), at(r, j));
        FieldElem inv = f.inv(at(r, c));
        for (int j = c; j < cols; ++j) at(r, j) = f.mul(at(r, j), inv);
        for (int i = 0; i < rows; ++i) {
            if (i == r || f.is_zero(at(i, c))) continue;
            FieldElem m = at(i, c);
            for (int j = c; j < cols; ++j)
                at(i, j) = f.sub(at(i, j), f.mul(m, at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

int DenseMat::rank() const {
    auto copy = data_;
    return int(rref_inplace(field_, rows_, cols_, copy).size());
}

std::vector<std::vector<FieldElem>> DenseMat::kernel_basis() const {
    auto copy = data_;
    auto pivots = rref_inplace(field_, rows_, cols_, copy);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    auto at = [&](int i, int j) { return copy[std::size_t(i) * cols_ + j]; };
    std::vector<std::vector<FieldElem>> basis;
    for (int c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        std::vector<FieldElem> v(cols_, field_.zero());
        v[c] = field_.one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = field_.neg(at(int(r), c));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<FieldElem>> DenseMat::solve(const std::vector<FieldElem>& b) const {
    require(int(b.size()) == rows_, "rhs has wrong length");
    // Eliminate the augmented matrix [A | b].
    int cols = cols_ + 1;
    std::vector<FieldElem> aug(std::size_t(rows_) * cols, field_.zero());
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug[std::size_t(i) * cols + j] = at(i, j);
        aug[std::size_t(i) * cols + cols_] = b[i];
    }
    auto pivots = rref_inplace(field_, rows_, cols, aug);
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;  // inconsistent
    std::vector<FieldElem> x(cols_, field_.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug[r * cols + cols_];
    return x;
}

FieldElem DenseMat::determinant() const {
    require(rows_ == cols_, "determinant of a non-square matrix");
    auto a = data_;
    auto at = [&](int i, int j) -> FieldElem& { return a[std::size_t(i) * cols_ + j]; };
    FieldElem det = field_.one();
    for (int c = 0; c < cols_; ++c) {
        int pr = -1;
        for (int i = c; i < rows_; ++i)
            if (!field_.is_zero(at(i, c))) {
                pr = i;
                break;
            }
        if (pr < 0) return field_.zero();
        if (pr != c) {
            for (int j = 0; j < cols_; ++j) std::swap(at(pr, j), at(c, j));
            det = field_.neg(det);
        }
        det = field_.mul(det, at(c, c));
        FieldElem inv = field_.inv(at(c, c));
        for (int i = c + 1; i < rows_; ++i) {
            if (field_.is_zero(at(i, c))) continue;
            FieldElem m = field_.mul(at(i, c), inv);
            for (int j = c; j < cols_; ++j)
                at(i, j) = field_.sub(at(i, j), field_.mul(m, at(c, j)));
        }
    }
    return det;
}

// ---------------------------------------------------------------- FpSpan --

FpSpan::FpSpan(std::uint32_t p, std::uint32_t ambient_dim, bool track)
    : p_(p), dim_(ambient_dim), track_(track),
      scratch_(ambient_dim, 0), stamp_(ambient_dim, 0) {}

void FpSpan::scatter(const SparseVec& v) {
    ++epoch_;
    for (auto [idx, val] : v.ents) {
        require(idx < dim_, "sparse index out of range: ", idx, " >= ", dim_);
        scratch_[idx] = val;
        stamp_[idx] = epoch_;
    }
}

FpSpan::Reduction FpSpan::reduce(const SparseVec& v) {
    scatter(v);
    std::uint32_t combo_epoch = 0;
    if (track_) {
        if (combo_scratch_.empty()) {
            combo_scratch_.resize(1024, 0);
            combo_stamp_.resize(1024, 0);
        }
        if (combo_scratch_.size() < std::size_t(n_inserted_) + 1) {
            combo_scratch_.resize(2 * (n_inserted_ + 1), 0);
            combo_stamp_.resize(2 * (n_inserted_ + 1), 0);
        }
        combo_epoch = epoch_;
    }
    // Echelon rows only touch indices >= their pivot, so a single ascending
    // pass over rows_ (sorted by pivot) fully reduces the vector.
    for (const Row& row : rows_) {
        std::uint32_t lead = row.vec.ents.front().first;
        if (stamp_[lead] != epoch_) continue;
        std::uint64_t c = scratch_[lead] % p_;
        if (!c) continue;
        std::uint64_t mc = p_ - c;  // subtract c * row == add (p - c) * row
        for (auto [idx, val] : row.vec.ents) {
            if (stamp_[idx] != epoch_) {
                scratch_[idx] = 0;
                stamp_[idx] = epoch_;
            }
            // Deferred mod: entries stay < p^2 per add; u64 holds ~2^33 adds.
            scratch_[idx] += mc * val % p_;
        }
        if (track_) {
            for (auto [id, cc] : row.combo.ents) {
                if (combo_stamp_[id] != combo_epoch) {
                    combo_scratch_[id] = 0;
                    combo_stamp_[id] = combo_epoch;
                }
                combo_scratch_[id] += c * cc % p_;
            }
        }
    }
    Reduction out;
    for (std::uint32_t i = 0; i < dim_; ++i)
        if (stamp_[i] == epoch_) out.remainder.push(i, std::uint32_t(scratch_[i] % p_));
    if (track_)
        for (int id = 0; id < n_inserted_; ++id)
            if (combo_stamp_[id] == combo_epoch)
                out.combo.push(std::uint32_t(id), std::uint32_t(combo_scratch_[id] % p_));
    return out;
}

bool FpSpan::insert(const SparseVec& v) { return absorb(reduce(v)); }

bool FpSpan::absorb(Reduction red) {
    int id = n_inserted_++;
    if (red.remainder.empty()) return false;
    // Normalize to leading coefficient 1.
    std::uint32_t lead = red.remainder.ents.front().first;
    std::uint64_t inv = 1;
    {
        // Fermat inverse (p prime).
        std::uint64_t base = red.remainder.ents.front().second, e = p_ - 2;
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = r * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        inv = r;
    }
    Row row;
    for (auto [idx, val] : red.remainder.ents)
        row.vec.push(idx, std::uint32_t(std::uint64_t(val) * inv % p_));
    if (track_) {
        // remainder = v - sum combo; normalized row = inv*(v - sum combo),
        // so the tracked expansion of the row is inv*e_id - inv*combo.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ents;
        for (auto [cid, cc] : red.combo.ents)
            ents.emplace_back(cid, std::uint32_t((p_ - std::uint32_t(std::uint64_t(cc) * inv % p_)) % p_));
        ents.emplace_back(std::uint32_t(id), std::uint32_t(inv % p_));
        std::sort(ents.begin(), ents.end());
        for (auto [cid, cc] : ents) row.combo.push(cid, cc);
    }
    // Keep rows_ sorted by leading index.
    auto it = std::lower_bound(rows_.begin(), rows_.end(), lead, [](const Row& r, std::uint32_t l) {
        return r.vec.ents.front().first < l;
    });
    rows_.insert(it, std::move(row));
    return true;
}

std::vector<std::uint32_t> FpSpan::pivot_columns() const {
    std::vector<std::uint32_t> out;
    out.reserve(rows_.size());
    for (const Row& r : rows_) out.push_back(r.vec.ents.front().first);
    return out;
}

std::vector<SparseVec> FpSpan::row_vectors() const {
    std::vector<SparseVec> out;
    out.reserve(rows_.size());
    for (const Row& r : rows_) out.push_back(r.vec);
    return out;
}

SparseKernel sparse_column_kernel(std::uint32_t nrows, const std::vector<SparseVec>& cols,
                                  std::uint32_t p) {
    FpSpan span(p, nrows, /*track=*/true);
    SparseKernel out;
    for (std::uint32_t j = 0; j < cols.size(); ++j) {
        auto red = span.reduce(cols[j]);
        if (red.remainder.empty()) {
            // col_j = sum combo: kernel vector e_j - combo.
            SparseVec k;
            std::vector<std::pair<std::uint32_t, std::uint32_t>> ents;
            for (auto [id, c] : red.combo.ents) ents.emplace_back(id, (p - c) % p);
            ents.emplace_back(j, 1);
            std::sort(ents.begin(), ents.end());
            for (auto [i, c] : ents) k.push(i, c);
            out.basis.push_back(std::move(k));
        }
        span.absorb(std::move(red));  // keeps inserted-id numbering aligned with j
    }
    out.rank = span.rank();
    return out;
}

int sparse_rank(std::uint32_t nrows, const std::vector<SparseVec>& cols, std::uint32_t p) {
    FpSpan span(p, nrows, /*track=*/false);
    for (const auto& c : cols) span.insert(c);
    return span.rank();
}

std::optional<SparseVec> sparse_solve(std::uint32_t nrows, const std::vector<SparseVec>& cols,
                                      const SparseVec& rhs, std::uint32_t p) {
    FpSpan span(p, nrows, /*track=*/true);
    for (const auto& c : cols) span.insert(c);
    auto red = span.reduce(rhs);
    if (!red.remainder.empty()) return std::nullopt;
    return red.combo;
}

}  // namespace detk::la

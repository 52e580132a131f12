// Exact linear algebra over the coefficient fields.
//
// Two engines:
//  * DenseMat — runtime-field dense matrices (Q or F_p), Gaussian elimination
//    with lowest-index pivoting. Fine up to a few hundred rows/cols.
//  * FpSpan — an online row-space echelon over F_p for sparse vectors, with
//    optional combination tracking (witnesses). All heavy degreewise kernel
//    and span computations ride on this.
//
// Pivot policy everywhere: the pivot is the lowest-index usable entry, so
// results are deterministic across runs and platforms.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "detk/field.hpp"

namespace detk::la {

using rings::CoeffField;
using rings::FieldElem;

class DenseMat {
  public:
    DenseMat(CoeffField field, int rows, int cols);
    static DenseMat identity(const CoeffField& field, int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const CoeffField& field() const { return field_; }

    const FieldElem& at(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
    void set(int i, int j, const FieldElem& v) { data_[std::size_t(i) * cols_ + j] = v; }

    DenseMat multiply(const DenseMat& o) const;
    DenseMat transpose() const;
    bool is_zero() const;

    int rank() const;
    // Basis of {x : Ax = 0}, deterministic: free variables in increasing
    // column order, each kernel vector has 1 at its free column.
    std::vector<std::vector<FieldElem>> kernel_basis() const;
    // One solution of Ax = b if it exists.
    std::optional<std::vector<FieldElem>> solve(const std::vector<FieldElem>& b) const;
    FieldElem determinant() const;

  private:
    CoeffField field_;
    int rows_, cols_;
    std::vector<FieldElem> data_;
};

// Sorted sparse vector over F_p: (index, value) with value in (0, p).
struct SparseVec {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ents;

    bool empty() const { return ents.empty(); }
    void push(std::uint32_t idx, std::uint32_t val) {
        if (val) ents.emplace_back(idx, val);
    }
};

// Row space of a growing set of sparse F_p vectors, kept in (non-reduced)
// echelon form with unit leading coefficients. Insertion order is the
// dependency order: when tracking is on, every echelon row knows its
// expansion over the inserted vectors, so membership witnesses and kernel
// combinations come out deterministically.
class FpSpan {
  public:
    FpSpan(std::uint32_t p, std::uint32_t ambient_dim, bool track = false);

    std::uint32_t ambient_dim() const { return dim_; }
    int rank() const { return int(rows_.size()); }
    int inserted() const { return n_inserted_; }

    struct Reduction {
        SparseVec remainder;
        // remainder = v - sum combo[id] * inserted[id]; only filled when
        // tracking is enabled.
        SparseVec combo;
    };

    // Reduce v against the current span (no insertion).
    Reduction reduce(const SparseVec& v);

    // Reduce and, if independent, add the remainder to the span.
    // Returns true when the rank grew.
    bool insert(const SparseVec& v);

    // Consume the reduction of the *next* vector (from reduce()) without
    // recomputing it; same effect as insert on that vector.
    bool absorb(Reduction red);

    // Columns of the pivot positions currently used, increasing.
    std::vector<std::uint32_t> pivot_columns() const;

    // The echelon rows themselves (unit leading coefficient, sorted by pivot).
    std::vector<SparseVec> row_vectors() const;

  private:
    struct Row {
        SparseVec vec;    // leading coefficient 1, leading index = pivot
        SparseVec combo;  // expansion over inserted vector ids
    };

    void scatter(const SparseVec& v);
    SparseVec gather_sorted();

    std::uint32_t p_;
    std::uint32_t dim_;
    bool track_;
    int n_inserted_ = 0;
    std::vector<Row> rows_;  // sorted by leading index

    // Epoch-stamped dense scratch (no per-call clearing).
    std::vector<std::uint64_t> scratch_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint64_t> combo_scratch_;
    std::vector<std::uint32_t> combo_stamp_;
    std::uint32_t epoch_ = 0;
};

struct SparseKernel {
    int rank = 0;
    // Kernel vectors over the column index space, sorted entries.
    std::vector<SparseVec> basis;
};

// Kernel of the matrix whose columns are `cols` inside F_p^{nrows}; basis
// vectors are "earliest dependency": column j's dependency on columns < j.
SparseKernel sparse_column_kernel(std::uint32_t nrows, const std::vector<SparseVec>& cols,
                                  std::uint32_t p);

int sparse_rank(std::uint32_t nrows, const std::vector<SparseVec>& cols, std::uint32_t p);

// Solve A x = b for sparse columns A; returns expansion over column indices
// or nullopt. Deterministic (earliest-dependency) solution.
std::optional<SparseVec> sparse_solve(std::uint32_t nrows, const std::vector<SparseVec>& cols,
                                      const SparseVec& rhs, std::uint32_t p);

}  // namespace detk::la

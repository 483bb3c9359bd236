#pragma once

#include <span>
#include <vector>

#include "tpg/fock/state.hpp"

namespace tpg {

enum class Ladder : std::uint8_t { Annihilate, Create };

/// coefficient * f_1 f_2 ... f_k, factors applied right to left (the last factor acts first).
struct LadderTerm {
    struct Factor {
        std::size_t position; ///< mode position in the layout
        Ladder      kind;
    };
    cplx                coefficient{1.0};
    std::vector<Factor> factors;
};

/// Operator on a truncated Fock layout, stored as a sum of ladder monomials. Matrix
/// elements are produced on demand, so operators on large layouts can act on sparse
/// states or be restricted to a subspace without materialising the full matrix.
/// Truncation: a†|d-1> = 0, a|0> = 0.
class SparseOperator {
  public:
    SparseOperator() = default;
    explicit SparseOperator(ModeLayout layout) : layout_(std::move(layout)) {}
    SparseOperator(ModeLayout layout, std::vector<LadderTerm> terms);

    static SparseOperator identity(const ModeLayout &layout);
    static SparseOperator ladder(const ModeLayout &layout, Mode mode, Ladder kind);
    static SparseOperator number(const ModeLayout &layout, Mode mode);

    [[nodiscard]] const ModeLayout              &layout() const { return layout_; }
    [[nodiscard]] const std::vector<LadderTerm> &terms() const { return terms_; }

    [[nodiscard]] SparseOperator adjoint() const;
    SparseOperator              &operator+=(const SparseOperator &rhs);
    SparseOperator              &operator*=(cplx factor);
    friend SparseOperator        operator+(SparseOperator lhs, const SparseOperator &rhs) { return lhs += rhs; }
    friend SparseOperator        operator-(SparseOperator lhs, const SparseOperator &rhs) { return lhs += rhs * cplx{-1.0}; }
    friend SparseOperator        operator*(SparseOperator lhs, cplx factor) { return lhs *= factor; }
    friend SparseOperator        operator*(cplx factor, SparseOperator rhs) { return rhs *= factor; }
    /// Operator product lhs * rhs (rhs acts first).
    friend SparseOperator operator*(const SparseOperator &lhs, const SparseOperator &rhs);

    /// Calls fn(row, value) for every nonzero <row|O|col>; rows may repeat across terms.
    template<class Fn>
    void for_each_in_column(index_t col, Fn &&fn) const {
        for(const auto &term : terms_) {
            index_t row = col;
            cplx    val = term.coefficient;
            if(apply_term(term, row, val)) fn(row, val);
        }
    }

    [[nodiscard]] StateVector apply(const StateVector &psi) const;
    /// Full matrix; throws UsageError if the layout dimension exceeds `max_dimension`.
    [[nodiscard]] SparseXc matrix(index_t max_dimension = index_t{1} << 20) const;
    /// Matrix restricted to the sorted basis subset; elements leaving the subset are dropped.
    [[nodiscard]] SparseXc restricted(std::span<const index_t> basis) const;
    /// Sorted closure of `seeds` under the action of this operator and its adjoint.
    /// Throws NumericalFailure when the closure exceeds `limit` states.
    [[nodiscard]] std::vector<index_t> reachable(std::span<const index_t> seeds, index_t limit) const;
    /// max |O - O†| over elements whose column lies in `basis`.
    [[nodiscard]] double hermiticity_defect(std::span<const index_t> basis) const;

  private:
    bool apply_term(const LadderTerm &term, index_t &index, cplx &value) const;

    ModeLayout              layout_;
    std::vector<LadderTerm> terms_;
};

/// Annihilation operator of `mode` on the full layout.
SparseOperator build_ladder(const ModeLayout &layout, Mode mode);

cplx expectation(const SparseOperator &op, const StateVector &psi);

} // namespace tpg

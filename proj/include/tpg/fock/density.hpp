#pragma once

#include <span>
#include <vector>

#include "tpg/fock/operator.hpp"

namespace tpg {

/// Hermitian trace-one operator stored densely on its support: the sorted basis
/// indices whose rows may be nonzero. Elements outside support x support are zero.
class DensityOperator {
  public:
    DensityOperator() = default;
    DensityOperator(ModeLayout layout, std::vector<index_t> support, MatrixXc matrix);

    static DensityOperator pure(const StateVector &psi);
    /// From a dense matrix over the whole layout; rows and columns that are entirely zero are dropped.
    static DensityOperator from_dense(const ModeLayout &layout, const MatrixXc &full);

    [[nodiscard]] const ModeLayout           &layout() const { return layout_; }
    [[nodiscard]] const std::vector<index_t> &support() const { return support_; }
    [[nodiscard]] const MatrixXc             &matrix() const { return matrix_; }
    /// Position of a basis index inside the support, or -1.
    [[nodiscard]] index_t position(index_t basis_index) const;
    [[nodiscard]] cplx    element(index_t row, index_t col) const;

    [[nodiscard]] double   trace() const { return matrix_.trace().real(); }
    [[nodiscard]] double   purity() const;
    [[nodiscard]] MatrixXc to_dense(index_t max_dimension = 4096) const;
    [[nodiscard]] DensityOperator normalized() const;

    /// Eigenvalues ascending (zeros for the complement of the support are not included).
    [[nodiscard]] std::vector<double> eigenvalues() const;
    /// Throws InvalidStateError unless Hermitian (1e-10), unit trace (1e-8), eigenvalues >= -1e-8.
    void validate() const;

  private:
    ModeLayout           layout_;
    std::vector<index_t> support_;
    MatrixXc             matrix_;
};

/// Hermitian (possibly indefinite) matrix on a support subset of a layout, stored sparse.
struct LayoutMatrix {
    ModeLayout           layout;
    std::vector<index_t> support;
    SparseXc             matrix;

    [[nodiscard]] cplx     element(index_t row, index_t col) const;
    [[nodiscard]] MatrixXc to_dense(index_t max_dimension = 4096) const;
    [[nodiscard]] cplx     trace() const;
};

/// Reduced state on `keep`. Throws UsageError if keep is empty.
DensityOperator partial_trace(const StateVector &psi, const ModeSet &keep);
DensityOperator partial_trace(const DensityOperator &rho, const ModeSet &keep);

/// Transpose on the listed modes. Throws UsageError unless `transposed` is a proper nonempty subset.
LayoutMatrix partial_transpose(const DensityOperator &rho, const ModeSet &transposed);
LayoutMatrix partial_transpose(const LayoutMatrix &m, const ModeSet &transposed);

/// Eigenvalues of a Hermitian matrix, computed per connected block of its sparsity graph.
std::vector<double> hermitian_eigenvalues(const SparseXc &m);
std::vector<double> hermitian_eigenvalues(const MatrixXc &m);

cplx expectation(const SparseOperator &op, const DensityOperator &rho);

} // namespace tpg

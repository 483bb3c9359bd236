#include "tpg/fock/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/util/components.hpp"

namespace tpg {

DensityOperator::DensityOperator(ModeLayout layout, std::vector<index_t> support, MatrixXc matrix)
    : layout_(std::move(layout)), support_(std::move(support)), matrix_(std::move(matrix)) {
    const auto n = static_cast<index_t>(support_.size());
    if(matrix_.rows() != n || matrix_.cols() != n) throw UsageError("density matrix shape does not match its support");
    for(std::size_t i = 0; i < support_.size(); ++i) {
        if(support_[i] < 0 || support_[i] >= layout_.dimension()) throw UsageError("support index outside layout");
        if(i > 0 && support_[i - 1] >= support_[i]) throw UsageError("support must be strictly increasing");
    }
}

DensityOperator DensityOperator::pure(const StateVector &psi) {
    VectorXc v(static_cast<index_t>(psi.nonzeros()));
    index_t  k = 0;
    for(const auto &e : psi.entries()) v[k++] = e.amplitude;
    return DensityOperator(psi.layout(), psi.support(), v * v.adjoint());
}

DensityOperator DensityOperator::from_dense(const ModeLayout &layout, const MatrixXc &full) {
    if(full.rows() != layout.dimension() || full.cols() != layout.dimension())
        throw UsageError("dense density matrix does not match layout dimension");
    std::vector<index_t> support;
    for(index_t i = 0; i < full.rows(); ++i)
        if(!full.row(i).isZero(0.0) || !full.col(i).isZero(0.0)) support.push_back(i);
    const auto n = static_cast<index_t>(support.size());
    MatrixXc   m(n, n);
    for(index_t r = 0; r < n; ++r)
        for(index_t c = 0; c < n; ++c) m(r, c) = full(support[static_cast<std::size_t>(r)], support[static_cast<std::size_t>(c)]);
    return DensityOperator(layout, std::move(support), std::move(m));
}

index_t DensityOperator::position(index_t basis_index) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), basis_index);
    return (it != support_.end() && *it == basis_index) ? static_cast<index_t>(it - support_.begin()) : -1;
}

cplx DensityOperator::element(index_t row, index_t col) const {
    const auto r = position(row), c = position(col);
    return (r < 0 || c < 0) ? cplx{} : matrix_(r, c);
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

MatrixXc DensityOperator::to_dense(index_t max_dimension) const {
    const index_t dim = layout_.dimension();
    if(dim > max_dimension) throw UsageError(fmt::format("layout dimension {} too large for a dense matrix", dim));
    MatrixXc full = MatrixXc::Zero(dim, dim);
    for(std::size_t r = 0; r < support_.size(); ++r)
        for(std::size_t c = 0; c < support_.size(); ++c)
            full(support_[r], support_[c]) = matrix_(static_cast<index_t>(r), static_cast<index_t>(c));
    return full;
}

DensityOperator DensityOperator::normalized() const {
    const double t = trace();
    if(!(t > 0)) throw InvalidStateError("cannot normalise a density operator with non-positive trace");
    return DensityOperator(layout_, support_, matrix_ / t);
}

std::vector<double> DensityOperator::eigenvalues() const { return hermitian_eigenvalues(matrix_); }

void DensityOperator::validate() const {
    const double herm = matrix_.size() ? (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if(herm > 1e-10) throw InvalidStateError(fmt::format("density operator not Hermitian (defect {:.3e})", herm));
    if(std::abs(trace() - 1.0) > 1e-8) throw InvalidStateError(fmt::format("density operator trace {} != 1", trace()));
    const auto ev = eigenvalues();
    if(!ev.empty() && ev.front() < -1e-8)
        throw InvalidStateError(fmt::format("density operator has negative eigenvalue {:.3e}", ev.front()));
}

cplx LayoutMatrix::element(index_t row, index_t col) const {
    auto r = std::lower_bound(support.begin(), support.end(), row);
    auto c = std::lower_bound(support.begin(), support.end(), col);
    if(r == support.end() || *r != row || c == support.end() || *c != col) return {};
    return matrix.coeff(static_cast<int>(r - support.begin()), static_cast<int>(c - support.begin()));
}

MatrixXc LayoutMatrix::to_dense(index_t max_dimension) const {
    const index_t dim = layout.dimension();
    if(dim > max_dimension) throw UsageError(fmt::format("layout dimension {} too large for a dense matrix", dim));
    MatrixXc full = MatrixXc::Zero(dim, dim);
    for(int k = 0; k < matrix.outerSize(); ++k)
        for(SparseXc::InnerIterator it(matrix, k); it; ++it)
            full(support[static_cast<std::size_t>(it.row())], support[static_cast<std::size_t>(it.col())]) = it.value();
    return full;
}

cplx LayoutMatrix::trace() const {
    cplx t{};
    for(int k = 0; k < matrix.rows(); ++k) t += matrix.coeff(k, k);
    return t;
}

namespace {

void check_keep(const ModeLayout &layout, const ModeSet &keep) {
    if(keep.empty()) throw UsageError("partial_trace: keep set must be nonempty");
    for(auto m : keep) (void)layout.require(m);
}

/// Builds a DensityOperator from (row, col, value) triplets on a sub-layout.
DensityOperator assemble(const ModeLayout &layout, const std::vector<std::tuple<index_t, index_t, cplx>> &entries) {
    std::vector<index_t> support;
    support.reserve(entries.size());
    for(const auto &[r, c, v] : entries) {
        support.push_back(r);
        support.push_back(c);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const auto n = static_cast<index_t>(support.size());
    MatrixXc   m = MatrixXc::Zero(n, n);
    auto       pos = [&](index_t i) { return std::lower_bound(support.begin(), support.end(), i) - support.begin(); };
    for(const auto &[r, c, v] : entries) m(pos(r), pos(c)) += v;
    return DensityOperator(layout, std::move(support), std::move(m));
}

} // namespace

DensityOperator partial_trace(const StateVector &psi, const ModeSet &keep) {
    check_keep(psi.layout(), keep);
    const IndexSplitter split(psi.layout(), keep);
    // Group amplitudes by the traced-out index: rho = sum_env |v_env><v_env|.
    std::map<index_t, std::vector<std::pair<index_t, cplx>>> groups;
    for(const auto &e : psi.entries()) {
        auto [k, env] = split.split(e.index);
        groups[env].emplace_back(k, e.amplitude);
    }
    std::vector<std::tuple<index_t, index_t, cplx>> entries;
    for(const auto &[env, v] : groups)
        for(const auto &[r, ar] : v)
            for(const auto &[c, ac] : v) entries.emplace_back(r, c, ar * std::conj(ac));
    return assemble(split.first(), entries);
}

DensityOperator partial_trace(const DensityOperator &rho, const ModeSet &keep) {
    check_keep(rho.layout(), keep);
    const IndexSplitter                             split(rho.layout(), keep);
    const auto                                     &s = rho.support();
    std::vector<std::pair<index_t, index_t>>        parts(s.size());
    for(std::size_t i = 0; i < s.size(); ++i) parts[i] = split.split(s[i]);
    std::vector<std::tuple<index_t, index_t, cplx>> entries;
    for(std::size_t r = 0; r < s.size(); ++r)
        for(std::size_t c = 0; c < s.size(); ++c)
            if(parts[r].second == parts[c].second)
                entries.emplace_back(parts[r].first, parts[c].first, rho.matrix()(static_cast<index_t>(r), static_cast<index_t>(c)));
    return assemble(split.first(), entries);
}

namespace {

void check_transposed(const ModeLayout &layout, const ModeSet &transposed) {
    if(transposed.empty()) throw UsageError("partial_transpose: transposed set must be nonempty");
    for(auto m : transposed) (void)layout.require(m);
    ModeSet uniq = transposed;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if(uniq.size() >= layout.size()) throw UsageError("partial_transpose: transposing every mode is not a partial transpose");
}

/// (row, col) -> (row', col') with the transposed modes' levels swapped between row and column.
template<class Visit>
void transpose_entries(const ModeLayout &layout, const ModeSet &transposed, const std::vector<index_t> &support, Visit &&visit) {
    const IndexSplitter split(layout, transposed);
    std::vector<std::pair<index_t, index_t>> parts(support.size());
    for(std::size_t i = 0; i < support.size(); ++i) parts[i] = split.split(support[i]);
    visit([&](std::size_t r, std::size_t c) {
        return std::pair{split.join(parts[c].first, parts[r].second), split.join(parts[r].first, parts[c].second)};
    });
}

LayoutMatrix from_triplets(const ModeLayout &layout, std::vector<std::tuple<index_t, index_t, cplx>> &entries) {
    std::vector<index_t> support;
    for(const auto &[r, c, v] : entries) {
        support.push_back(r);
        support.push_back(c);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    auto pos = [&](index_t i) { return static_cast<int>(std::lower_bound(support.begin(), support.end(), i) - support.begin()); };
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(entries.size());
    for(const auto &[r, c, v] : entries) trip.emplace_back(pos(r), pos(c), v);
    const auto n = static_cast<int>(support.size());
    SparseXc   m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return LayoutMatrix{layout, std::move(support), std::move(m)};
}

} // namespace

LayoutMatrix partial_transpose(const DensityOperator &rho, const ModeSet &transposed) {
    check_transposed(rho.layout(), transposed);
    std::vector<std::tuple<index_t, index_t, cplx>> entries;
    const auto                                     &s = rho.support();
    transpose_entries(rho.layout(), transposed, s, [&](auto &&map) {
        for(std::size_t r = 0; r < s.size(); ++r)
            for(std::size_t c = 0; c < s.size(); ++c) {
                const cplx v = rho.matrix()(static_cast<index_t>(r), static_cast<index_t>(c));
                if(v == cplx{}) continue;
                auto [nr, nc] = map(r, c);
                entries.emplace_back(nr, nc, v);
            }
    });
    return from_triplets(rho.layout(), entries);
}

LayoutMatrix partial_transpose(const LayoutMatrix &m, const ModeSet &transposed) {
    check_transposed(m.layout, transposed);
    std::vector<std::tuple<index_t, index_t, cplx>> entries;
    transpose_entries(m.layout, transposed, m.support, [&](auto &&map) {
        for(int k = 0; k < m.matrix.outerSize(); ++k)
            for(SparseXc::InnerIterator it(m.matrix, k); it; ++it) {
                if(it.value() == cplx{}) continue;
                auto [nr, nc] = map(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()));
                entries.emplace_back(nr, nc, it.value());
            }
    });
    return from_triplets(m.layout, entries);
}

namespace {

using util::DisjointSets;

template<class Element>
std::vector<double> blockwise_eigenvalues(int n, DisjointSets &sets, Element &&element) {
    std::map<int, std::vector<int>> blocks;
    for(int i = 0; i < n; ++i) blocks[sets.find(i)].push_back(i);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for(const auto &[root, members] : blocks) {
        const auto k = static_cast<index_t>(members.size());
        if(k == 1) {
            out.push_back(element(members[0], members[0]).real());
            continue;
        }
        MatrixXc b(k, k);
        for(index_t r = 0; r < k; ++r)
            for(index_t c = 0; c < k; ++c) b(r, c) = element(members[static_cast<std::size_t>(r)], members[static_cast<std::size_t>(c)]);
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(b, Eigen::EigenvaluesOnly);
        for(index_t i = 0; i < k; ++i) out.push_back(es.eigenvalues()[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<double> hermitian_eigenvalues(const SparseXc &m) {
    const int    n = static_cast<int>(m.rows());
    DisjointSets sets(n);
    for(int k = 0; k < m.outerSize(); ++k)
        for(SparseXc::InnerIterator it(m, k); it; ++it)
            if(it.value() != cplx{}) sets.unite(static_cast<int>(it.row()), static_cast<int>(it.col()));
    return blockwise_eigenvalues(n, sets, [&](int r, int c) { return m.coeff(r, c); });
}

std::vector<double> hermitian_eigenvalues(const MatrixXc &m) {
    const int    n = static_cast<int>(m.rows());
    DisjointSets sets(n);
    for(int c = 0; c < n; ++c)
        for(int r = 0; r < n; ++r)
            if(r != c && m(r, c) != cplx{}) sets.unite(r, c);
    return blockwise_eigenvalues(n, sets, [&](int r, int c) { return m(r, c); });
}

cplx expectation(const SparseOperator &op, const DensityOperator &rho) {
    if(!(op.layout() == rho.layout())) throw UsageError("operator and density operator live on different layouts");
    // Tr(rho O) = sum_col sum_row' <row'|O|col> rho(col, row')
    cplx        s{};
    const auto &sup = rho.support();
    for(std::size_t c = 0; c < sup.size(); ++c)
        op.for_each_in_column(sup[c], [&](index_t row, cplx v) {
            const auto r = rho.position(row);
            if(r >= 0) s += v * rho.matrix()(static_cast<index_t>(c), r);
        });
    return s;
}

} // namespace tpg

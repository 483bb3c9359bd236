#include "tpg/fock/operator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include <fmt/format.h>

#include "tpg/errors.hpp"

namespace tpg {

SparseOperator::SparseOperator(ModeLayout layout, std::vector<LadderTerm> terms)
    : layout_(std::move(layout)), terms_(std::move(terms)) {
    for(const auto &t : terms_)
        for(const auto &f : t.factors)
            if(f.position >= layout_.size()) throw UsageError("ladder factor refers to a mode outside the layout");
}

SparseOperator SparseOperator::identity(const ModeLayout &layout) { return SparseOperator(layout, {LadderTerm{}}); }

SparseOperator SparseOperator::ladder(const ModeLayout &layout, Mode mode, Ladder kind) {
    return SparseOperator(layout, {LadderTerm{cplx{1.0}, {{layout.require(mode), kind}}}});
}

SparseOperator SparseOperator::number(const ModeLayout &layout, Mode mode) {
    const auto p = layout.require(mode);
    return SparseOperator(layout, {LadderTerm{cplx{1.0}, {{p, Ladder::Create}, {p, Ladder::Annihilate}}}});
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out(layout_);
    out.terms_.reserve(terms_.size());
    for(const auto &t : terms_) {
        LadderTerm a{std::conj(t.coefficient), {}};
        for(auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
            a.factors.push_back({it->position, it->kind == Ladder::Create ? Ladder::Annihilate : Ladder::Create});
        out.terms_.push_back(std::move(a));
    }
    return out;
}

SparseOperator &SparseOperator::operator+=(const SparseOperator &rhs) {
    if(!(layout_ == rhs.layout_)) throw UsageError("adding operators on different layouts");
    terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    return *this;
}

SparseOperator &SparseOperator::operator*=(cplx factor) {
    for(auto &t : terms_) t.coefficient *= factor;
    return *this;
}

SparseOperator operator*(const SparseOperator &lhs, const SparseOperator &rhs) {
    if(!(lhs.layout_ == rhs.layout_)) throw UsageError("multiplying operators on different layouts");
    SparseOperator out(lhs.layout_);
    for(const auto &a : lhs.terms_)
        for(const auto &b : rhs.terms_) {
            LadderTerm t{a.coefficient * b.coefficient, a.factors};
            t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
            out.terms_.push_back(std::move(t));
        }
    return out;
}

bool SparseOperator::apply_term(const LadderTerm &term, index_t &index, cplx &value) const {
    for(auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
        const int n = layout_.level(index, it->position);
        if(it->kind == Ladder::Annihilate) {
            if(n == 0) return false;
            value *= std::sqrt(static_cast<double>(n));
            index -= layout_.stride(it->position);
        } else {
            if(n + 1 >= layout_[it->position].cutoff) return false;
            value *= std::sqrt(static_cast<double>(n + 1));
            index += layout_.stride(it->position);
        }
    }
    return value != cplx{};
}

StateVector SparseOperator::apply(const StateVector &psi) const {
    if(!(psi.layout() == layout_)) throw UsageError("operator and state live on different layouts");
    std::vector<StateVector::Entry> out;
    for(const auto &e : psi.entries())
        for_each_in_column(e.index, [&](index_t row, cplx v) { out.push_back({row, v * e.amplitude}); });
    return StateVector(layout_, std::move(out));
}

SparseXc SparseOperator::matrix(index_t max_dimension) const {
    const index_t dim = layout_.dimension();
    if(dim > max_dimension) throw UsageError(fmt::format("layout dimension {} too large to materialise", dim));
    std::vector<Eigen::Triplet<cplx>> trip;
    for(index_t col = 0; col < dim; ++col)
        for_each_in_column(col, [&](index_t row, cplx v) {
            trip.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
        });
    SparseXc m(static_cast<int>(dim), static_cast<int>(dim));
    m.setFromTriplets(trip.begin(), trip.end());
    m.prune(cplx{});
    return m;
}

SparseXc SparseOperator::restricted(std::span<const index_t> basis) const {
    std::vector<Eigen::Triplet<cplx>> trip;
    const auto                        n = static_cast<int>(basis.size());
    for(int col = 0; col < n; ++col)
        for_each_in_column(basis[static_cast<std::size_t>(col)], [&](index_t row, cplx v) {
            auto it = std::lower_bound(basis.begin(), basis.end(), row);
            if(it != basis.end() && *it == row) trip.emplace_back(static_cast<int>(it - basis.begin()), col, v);
        });
    SparseXc m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.prune(cplx{});
    return m;
}

std::vector<index_t> SparseOperator::reachable(std::span<const index_t> seeds, index_t limit) const {
    const SparseOperator       adj = adjoint();
    std::unordered_set<index_t> seen(seeds.begin(), seeds.end());
    std::deque<index_t>         queue(seeds.begin(), seeds.end());
    auto                        visit = [&](index_t row, cplx) {
        if(seen.insert(row).second) {
            if(static_cast<index_t>(seen.size()) > limit)
                throw NumericalFailure(fmt::format("reachable subspace exceeds {} states", limit));
            queue.push_back(row);
        }
    };
    while(!queue.empty()) {
        const index_t col = queue.front();
        queue.pop_front();
        for_each_in_column(col, visit);
        adj.for_each_in_column(col, visit);
    }
    std::vector<index_t> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

double SparseOperator::hermiticity_defect(std::span<const index_t> basis) const {
    const SparseXc a = restricted(basis);
    const SparseXc b = adjoint().restricted(basis);
    const SparseXc d = a - b;
    double         worst = 0;
    for(int k = 0; k < d.outerSize(); ++k)
        for(SparseXc::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

SparseOperator build_ladder(const ModeLayout &layout, Mode mode) {
    return SparseOperator::ladder(layout, mode, Ladder::Annihilate);
}

cplx expectation(const SparseOperator &op, const StateVector &psi) {
    cplx s{};
    for(const auto &e : psi.entries())
        op.for_each_in_column(e.index, [&](index_t row, cplx v) { s += std::conj(psi.amplitude(row)) * v * e.amplitude; });
    return s;
}

} // namespace tpg

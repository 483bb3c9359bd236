#pragma once

#include <span>
#include <vector>

#include "tpg/fock/layout.hpp"

namespace tpg {

/// Pure state over a ModeLayout. Amplitudes are stored sparsely as (basis index,
/// amplitude) pairs sorted by index; absent indices have amplitude zero.
class StateVector {
  public:
    struct Entry {
        index_t index;
        cplx    amplitude;
    };

    StateVector() = default;
    explicit StateVector(ModeLayout layout) : layout_(std::move(layout)) {}
    /// Duplicate indices are summed; exact zeros are dropped.
    StateVector(ModeLayout layout, std::vector<Entry> entries);

    static StateVector basis(const ModeLayout &layout, std::span<const int> occupation);
    static StateVector vacuum(const ModeLayout &layout);
    static StateVector from_dense(const ModeLayout &layout, const VectorXc &amplitudes);

    [[nodiscard]] const ModeLayout        &layout() const { return layout_; }
    [[nodiscard]] std::span<const Entry>   entries() const { return entries_; }
    [[nodiscard]] std::size_t              nonzeros() const { return entries_.size(); }
    [[nodiscard]] cplx                     amplitude(index_t index) const;
    [[nodiscard]] std::vector<index_t>     support() const;

    [[nodiscard]] double      norm() const;
    [[nodiscard]] StateVector normalized() const;
    [[nodiscard]] StateVector scaled(cplx factor) const;
    /// <this|other>; layouts must match.
    [[nodiscard]] cplx inner(const StateVector &other) const;
    /// Dense amplitude vector; throws UsageError if the layout exceeds `max_dimension`.
    [[nodiscard]] VectorXc to_dense(index_t max_dimension = index_t{1} << 24) const;

    /// Probability that `mode` occupies one of its top `levels` Fock levels.
    [[nodiscard]] double top_level_mass(Mode mode, int levels = 1) const;
    /// Photon-number distribution of one mode.
    [[nodiscard]] std::vector<double> level_distribution(Mode mode) const;

    /// Tensor product; every mode of `lhs` must precede every mode of `rhs` canonically.
    friend StateVector tensor(const StateVector &lhs, const StateVector &rhs);

  private:
    ModeLayout         layout_;
    std::vector<Entry> entries_;
};

/// Default tail-mass tolerance for coherent-state truncation.
inline constexpr double coherent_tail_tolerance = 1e-8;

/// Poisson probability mass above level cutoff-1 for |alpha|^2 mean photons.
double coherent_tail_mass(double alpha_abs, int cutoff);
/// Smallest cutoff whose coherent tail mass is below `tolerance`.
int coherent_cutoff_for(double alpha_abs, double tolerance);

/// Single-mode coherent state on `mode`, renormalised after truncation. Throws
/// TruncationError (naming the required cutoff) if the discarded mass exceeds `tolerance`.
StateVector coherent_state(int cutoff, cplx alpha, double tolerance = coherent_tail_tolerance, Mode mode = Mode::A);

} // namespace tpg

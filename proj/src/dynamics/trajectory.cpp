#include "tpg/dynamics/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>
#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/util/parallel.hpp"

namespace tpg {

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ index);
}

namespace {

constexpr int chunk_size = 64;

struct Model {
    std::vector<index_t> basis;
    MatrixXc             h_eff;
    std::vector<MatrixXc> jumps;
};

class Trajectory {
  public:
    Trajectory(const Model &m, const TrajectoryOptions &opts, std::uint64_t seed) : m_(m), opts_(opts), rng_(seed) {}

    // Advances psi (unnormalised between jumps) from `now` to `target`.
    void advance(VectorXc &psi, double now, double target) {
        while(now < target) {
            if(threshold_ < 0) threshold_ = uniform_(rng_);
            const VectorXc end = step(psi, target - now);
            if(end.squaredNorm() > threshold_) {
                psi = end;
                return;
            }
            // Bisection for the time at which the squared norm crosses the threshold.
            double lo = 0, hi = target - now;
            while(hi - lo > opts_.jump_time_tolerance * std::max(1.0, target)) {
                const double mid = 0.5 * (lo + hi);
                if(step(psi, mid).squaredNorm() > threshold_) lo = mid;
                else hi = mid;
            }
            psi = step(psi, hi);
            now += hi;
            jump(psi);
            threshold_ = -1;
        }
    }

  private:
    VectorXc step(const VectorXc &psi, double dt) const {
        if(dt == 0) return psi;
        const MatrixXc u = (m_.h_eff * cplx{0.0, -dt}).exp();
        return u * psi;
    }

    void jump(VectorXc &psi) {
        std::vector<double> weights;
        double              total = 0;
        for(const auto &c : m_.jumps) {
            weights.push_back((c * psi).squaredNorm());
            total += weights.back();
        }
        if(!(total > 0)) throw NumericalFailure("collapse event with zero norm");
        double pick = uniform_(rng_) * total;
        std::size_t k = 0;
        while(k + 1 < weights.size() && pick >= weights[k]) pick -= weights[k++];
        psi = m_.jumps[k] * psi;
        const double n = psi.norm();
        if(!(n > 0)) throw NumericalFailure("collapse event with zero norm");
        psi /= n;
    }

    const Model                           &m_;
    const TrajectoryOptions               &opts_;
    std::mt19937_64                        rng_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    double                                 threshold_ = -1;
};

} // namespace

std::vector<DensityOperator> trajectory_solver(const SparseOperator &h, std::span<const SparseOperator> collapse_ops,
                                               const StateVector &psi0, std::span<const double> t_grid, int n_traj,
                                               std::uint64_t seed, const TrajectoryOptions &opts) {
    if(n_traj < 1) throw UsageError("trajectory_solver: n_traj must be >= 1");
    for(std::size_t i = 0; i < t_grid.size(); ++i)
        if(!(t_grid[i] >= 0) || (i > 0 && t_grid[i] < t_grid[i - 1])) throw UsageError("time grid must be nonnegative and nondecreasing");
    for(const auto &c : collapse_ops)
        if(!(c.layout() == h.layout())) throw UsageError("collapse operator acts on a different layout");
    if(!(psi0.layout() == h.layout())) throw UsageError("Hamiltonian and state live on different layouts");

    std::vector<DensityOperator> out;
    if(collapse_ops.empty()) {
        for(const auto &psi : propagate(h, psi0, t_grid)) out.push_back(DensityOperator::pure(psi));
        return out;
    }

    // Subspace closed under H and every collapse operator.
    SparseOperator generator = h;
    for(const auto &c : collapse_ops) generator += c;
    Model model;
    model.basis = generator.reachable(psi0.support(), opts.max_subspace);
    const auto n = static_cast<index_t>(model.basis.size());
    model.h_eff  = MatrixXc(h.restricted(model.basis));
    for(const auto &c : collapse_ops) {
        MatrixXc cm = MatrixXc(c.restricted(model.basis));
        model.h_eff -= cplx{0.0, 0.5} * (cm.adjoint() * cm);
        model.jumps.push_back(std::move(cm));
    }
    VectorXc v0 = VectorXc::Zero(n);
    for(const auto &e : psi0.entries()) {
        auto it = std::lower_bound(model.basis.begin(), model.basis.end(), e.index);
        v0[it - model.basis.begin()] = e.amplitude;
    }
    v0.normalize();

    const int              chunks = (n_traj + chunk_size - 1) / chunk_size;
    std::vector<std::vector<MatrixXc>> partial(static_cast<std::size_t>(chunks));
    util::parallel_for(static_cast<std::size_t>(chunks), opts.threads, [&](std::size_t ci) {
        auto &acc = partial[ci];
        acc.assign(t_grid.size(), MatrixXc::Zero(n, n));
        const int first = static_cast<int>(ci) * chunk_size;
        const int last  = std::min(n_traj, first + chunk_size);
        for(int k = first; k < last; ++k) {
            Trajectory traj(model, opts, trajectory_seed(seed, static_cast<std::uint64_t>(k)));
            VectorXc   psi = v0;
            double     now = 0;
            for(std::size_t ti = 0; ti < t_grid.size(); ++ti) {
                traj.advance(psi, now, t_grid[ti]);
                now                 = t_grid[ti];
                const VectorXc unit = psi / psi.norm();
                acc[ti].noalias() += unit * unit.adjoint();
            }
        }
    });

    for(std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        MatrixXc rho = MatrixXc::Zero(n, n);
        for(const auto &acc : partial) rho += acc[ti];
        rho /= static_cast<double>(n_traj);
        out.emplace_back(h.layout(), model.basis, std::move(rho));
    }
    return out;
}

} // namespace tpg

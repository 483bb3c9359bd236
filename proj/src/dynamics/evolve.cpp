#include "tpg/dynamics/evolve.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/util/components.hpp"

namespace tpg {

std::string to_string(PropagationMethod m) {
    switch(m) {
    case PropagationMethod::Auto: return "auto";
    case PropagationMethod::Dense: return "dense";
    case PropagationMethod::Krylov: return "krylov";
    }
    return "?";
}

PropagationMethod parse_method(std::string_view s) {
    if(s == "auto") return PropagationMethod::Auto;
    if(s == "dense") return PropagationMethod::Dense;
    if(s == "krylov") return PropagationMethod::Krylov;
    throw ConfigurationError(fmt::format("unknown propagation method '{}'", s));
}

namespace {

void check_times(std::span<const double> times, const char *what) {
    for(std::size_t i = 0; i < times.size(); ++i) {
        if(!(times[i] >= 0) || !std::isfinite(times[i])) throw UsageError(fmt::format("{} values must be finite and >= 0", what));
        if(i > 0 && times[i] < times[i - 1]) throw UsageError(fmt::format("{} must be nondecreasing", what));
    }
}

VectorXc gather(const StateVector &psi, std::span<const index_t> basis) {
    VectorXc v = VectorXc::Zero(static_cast<index_t>(basis.size()));
    for(const auto &e : psi.entries()) {
        auto it = std::lower_bound(basis.begin(), basis.end(), e.index);
        v[it - basis.begin()] = e.amplitude;
    }
    return v;
}

StateVector scatter(const ModeLayout &layout, std::span<const index_t> basis, const VectorXc &v) {
    std::vector<StateVector::Entry> entries;
    entries.reserve(basis.size());
    for(std::size_t i = 0; i < basis.size(); ++i)
        if(v[static_cast<index_t>(i)] != cplx{}) entries.push_back({basis[i], v[static_cast<index_t>(i)]});
    return StateVector(layout, std::move(entries));
}

std::vector<VectorXc> propagate_dense(const SparseXc &h, const std::vector<std::vector<int>> &blocks, const VectorXc &v0,
                                      std::span<const double> times) {
    std::vector<VectorXc> out(times.size(), VectorXc::Zero(v0.size()));
    for(const auto &members : blocks) {
        const auto k = static_cast<index_t>(members.size());
        MatrixXc   hb(k, k);
        VectorXc   c0(k);
        for(index_t r = 0; r < k; ++r) {
            c0[r] = v0[members[static_cast<std::size_t>(r)]];
            for(index_t c = 0; c < k; ++c) hb(r, c) = h.coeff(members[static_cast<std::size_t>(r)], members[static_cast<std::size_t>(c)]);
        }
        if(c0.squaredNorm() == 0) continue;
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(hb);
        if(es.info() != Eigen::Success) throw NumericalFailure("Hamiltonian block eigendecomposition failed");
        const VectorXc proj = es.eigenvectors().adjoint() * c0;
        for(std::size_t ti = 0; ti < times.size(); ++ti) {
            VectorXc phased(k);
            for(index_t i = 0; i < k; ++i) phased[i] = std::exp(cplx{0.0, -es.eigenvalues()[i] * times[ti]}) * proj[i];
            const VectorXc ct = es.eigenvectors() * phased;
            for(index_t r = 0; r < k; ++r) out[ti][members[static_cast<std::size_t>(r)]] = ct[r];
        }
    }
    return out;
}

// Lanczos basis of the Krylov space K_m(H, v) with full reorthogonalisation.
struct Lanczos {
    MatrixXc        q;
    Eigen::VectorXd alpha, beta; // beta(j) couples q_j and q_{j+1}; beta(m-1) is the residual norm
    int             m = 0;
    double          v_norm = 0;
};

Lanczos lanczos(const SparseXc &h, const VectorXc &v, int max_dim) {
    Lanczos    l;
    const auto n = v.size();
    const int  cap = static_cast<int>(std::min<index_t>(max_dim, n));
    l.v_norm       = v.norm();
    l.q.resize(n, cap + 1);
    l.alpha.setZero(cap);
    l.beta.setZero(cap);
    l.q.col(0) = v / l.v_norm;
    for(int j = 0; j < cap; ++j) {
        VectorXc w = h * l.q.col(j);
        l.alpha[j] = l.q.col(j).dot(w).real();
        w -= l.alpha[j] * l.q.col(j);
        if(j > 0) w -= l.beta[j - 1] * l.q.col(j - 1);
        for(int pass = 0; pass < 2; ++pass) w -= l.q.leftCols(j + 1) * (l.q.leftCols(j + 1).adjoint() * w);
        l.beta[j] = w.norm();
        l.m       = j + 1;
        if(l.beta[j] < 1e-12 * std::max(1.0, std::abs(l.alpha[j]))) {
            l.beta[j] = 0;
            break;
        }
        l.q.col(j + 1) = w / l.beta[j];
    }
    return l;
}

struct SmallExp {
    Eigen::VectorXd evals;
    MatrixXc        evecs;
    VectorXc        e1_proj;
};

SmallExp tridiagonal_eigen(const Lanczos &l) {
    MatrixXc t = MatrixXc::Zero(l.m, l.m);
    for(int j = 0; j < l.m; ++j) {
        t(j, j) = l.alpha[j];
        if(j + 1 < l.m) t(j, j + 1) = t(j + 1, j) = l.beta[j];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(t);
    return {es.eigenvalues(), es.eigenvectors(), es.eigenvectors().row(0).adjoint()};
}

VectorXc small_exp_e1(const SmallExp &s, double tau) {
    VectorXc phased(s.evals.size());
    for(index_t i = 0; i < s.evals.size(); ++i) phased[i] = std::exp(cplx{0.0, -s.evals[i] * tau}) * s.e1_proj[i];
    return s.evecs * phased;
}

VectorXc krylov_advance(const SparseXc &h, VectorXc v, double duration, const EvolveOptions &opts, double &tau_hint) {
    double remaining = duration;
    while(remaining > 0) {
        if(v.squaredNorm() == 0) return v;
        const Lanczos  l = lanczos(h, v, opts.krylov_dim);
        const SmallExp s = tridiagonal_eigen(l);
        const double   residual = l.beta[l.m - 1];
        double         tau = std::min(remaining, tau_hint > 0 ? tau_hint : remaining);
        VectorXc       y;
        for(int tries = 0;; ++tries) {
            y                 = small_exp_e1(s, tau);
            const double err  = l.v_norm * residual * std::abs(y[l.m - 1]);
            if(err <= opts.krylov_local_error || residual == 0) break;
            if(tries > 60) throw NumericalFailure("Krylov step size underflow");
            tau *= 0.5;
        }
        v = l.v_norm * (l.q.leftCols(l.m) * y);
        remaining -= tau;
        if(remaining < 1e-15 * duration) remaining = 0;
        tau_hint = tau * 1.5;
    }
    return v;
}

std::vector<VectorXc> propagate_krylov(const SparseXc &h, const VectorXc &v0, std::span<const double> times,
                                       const EvolveOptions &opts) {
    std::vector<VectorXc> out;
    out.reserve(times.size());
    VectorXc v   = v0;
    double   now = 0, hint = 0;
    for(double t : times) {
        if(t > now) v = krylov_advance(h, v, t - now, opts, hint);
        now = t;
        out.push_back(v);
    }
    return out;
}

} // namespace

std::vector<StateVector> propagate(const SparseOperator &h, const StateVector &psi0, std::span<const double> times,
                                   const EvolveOptions &opts, PropagationMethod *used, index_t *subspace) {
    check_times(times, "time grid");
    if(!(h.layout() == psi0.layout())) throw UsageError("Hamiltonian and state live on different layouts");
    const auto support = psi0.support();
    const auto basis   = h.reachable(support, opts.max_subspace);
    if(subspace) *subspace = static_cast<index_t>(basis.size());

    const SparseXc hr     = h.restricted(basis);
    const VectorXc v0     = gather(psi0, basis);
    const auto     blocks = util::connected_components(hr);
    std::size_t    largest = 0;
    for(const auto &b : blocks) largest = std::max(largest, b.size());

    PropagationMethod method = opts.method;
    if(method == PropagationMethod::Auto)
        method = static_cast<index_t>(largest) <= opts.dense_block_limit ? PropagationMethod::Dense : PropagationMethod::Krylov;
    if(used) *used = method;

    const auto vs = method == PropagationMethod::Dense ? propagate_dense(hr, blocks, v0, times) : propagate_krylov(hr, v0, times, opts);
    std::vector<StateVector> out;
    out.reserve(vs.size());
    for(std::size_t i = 0; i < vs.size(); ++i) {
        // t = 0 is returned exactly
        out.push_back(times[i] == 0 ? psi0 : scatter(h.layout(), basis, vs[i]));
    }
    return out;
}

EvolutionResult evolve(const Hamiltonian &h, const StateVector &psi0, std::span<const double> xi_grid, const EvolveOptions &opts) {
    check_times(xi_grid, "xi grid");
    if(std::abs(psi0.norm() - 1) > opts.norm_tolerance) throw InvalidStateError("evolve: initial state is not normalized");

    EvolutionResult res;
    res.xi_grid.assign(xi_grid.begin(), xi_grid.end());
    res.warnings = h.warnings;
    std::vector<double> times;
    for(double xi : xi_grid) {
        if(h.xi_rate == 0 && xi > 0) throw ConfigurationError("xi > 0 requested but kappa * |alpha_p| = 0");
        times.push_back(xi == 0 ? 0.0 : xi / h.xi_rate);
    }
    res.states = propagate(h.op, psi0, times, opts, &res.method_used, &res.subspace_dimension);

    const auto &layout = h.op.layout();
    for(std::size_t i = 0; i < res.states.size(); ++i) {
        PointDiagnostics d;
        d.norm_drift = std::abs(res.states[i].norm() - 1);
        if(d.norm_drift > opts.norm_tolerance)
            throw NumericalFailure(fmt::format("norm drift {:.3e} at xi={} exceeds {:.1e}", d.norm_drift, xi_grid[i], opts.norm_tolerance));
        for(std::size_t p = 0; p < layout.size(); ++p) {
            const Mode   m    = layout[p].label;
            const double mass = res.states[i].top_level_mass(m, 2);
            d.top_mass.push_back(mass);
            if(mass > opts.tail_threshold) {
                const int  d_now = layout[p].cutoff;
                const auto msg   = fmt::format("mode {} top-two-level mass {:.3e} at xi={} exceeds {:.1e} (cutoff {})", to_char(m),
                                               mass, xi_grid[i], opts.tail_threshold, d_now);
                if(opts.truncation_is_error) throw TruncationError(msg, d_now + std::max(2, d_now / 2));
                if(std::find(res.warnings.begin(), res.warnings.end(), msg) == res.warnings.end()) res.warnings.push_back(msg);
            }
        }
        res.diagnostics.push_back(std::move(d));
    }
    return res;
}

std::string CutoffAuditReport::summary() const {
    std::string s = fmt::format("cutoff audit at xi_max={} (threshold {:.1e}): {}", xi_max, threshold, pass ? "pass" : "FAIL");
    for(const auto &e : modes)
        s += fmt::format("\n  mode {} cutoff {} top-two mass {:.3e} {}", to_char(e.mode), e.cutoff, e.top_mass,
                         e.pass ? "ok" : fmt::format("FAIL (suggest cutoff {})", e.suggested_cutoff));
    return s;
}

namespace {

std::vector<double> audit_masses(const HamiltonianSpec &spec, double xi_max, const ModeLayout &layout) {
    const auto h    = build_hamiltonian(spec, layout);
    const auto psi0 = initial_state(spec, layout, 1.0);
    std::vector<double> masses(layout.size(), 0.0);
    const double        grid[] = {h.xi_rate == 0 ? 0.0 : xi_max / h.xi_rate};
    if(xi_max == 0 || h.xi_rate == 0) {
        for(std::size_t p = 0; p < layout.size(); ++p) masses[p] = psi0.top_level_mass(layout[p].label, 2);
        return masses;
    }
    EvolveOptions opts;
    opts.tail_threshold = 1.0; // audit reports, never warns
    const auto psi = propagate(h.op, psi0, std::span<const double>(grid, 1), opts)[0];
    for(std::size_t p = 0; p < layout.size(); ++p) masses[p] = psi.top_level_mass(layout[p].label, 2);
    return masses;
}

} // namespace

CutoffAuditReport cutoff_audit(const HamiltonianSpec &spec, double xi_max, const ModeLayout &layout, double threshold) {
    CutoffAuditReport rep;
    rep.xi_max    = xi_max;
    rep.threshold = threshold;
    if(xi_max < 0) throw UsageError("cutoff_audit: xi_max must be >= 0");

    const auto masses = audit_masses(spec, xi_max, layout);
    std::vector<ModeSpec> grown(layout.modes().begin(), layout.modes().end());
    bool                  any_fail = false;
    for(std::size_t p = 0; p < layout.size(); ++p) {
        CutoffAuditEntry e{layout[p].label, layout[p].cutoff, masses[p], masses[p] <= threshold, layout[p].cutoff};
        any_fail |= !e.pass;
        rep.modes.push_back(e);
    }
    rep.pass = !any_fail;

    // Grow the failing cutoffs until they pass to produce a suggestion.
    for(int round = 0; any_fail && round < 8; ++round) {
        for(std::size_t p = 0; p < grown.size(); ++p)
            if(!rep.modes[p].pass && rep.modes[p].suggested_cutoff == layout[p].cutoff) grown[p].cutoff += std::max(2, grown[p].cutoff / 2);
        const ModeLayout trial(grown);
        if(trial.dimension() > (index_t{1} << 40)) break;
        std::vector<double> m;
        try {
            m = audit_masses(spec, xi_max, trial);
        } catch(const NumericalFailure &) {
            break;
        }
        any_fail = false;
        for(std::size_t p = 0; p < grown.size(); ++p) {
            if(rep.modes[p].pass || rep.modes[p].suggested_cutoff != layout[p].cutoff) continue;
            if(m[p] <= threshold) rep.modes[p].suggested_cutoff = grown[p].cutoff;
            else any_fail = true;
        }
    }
    for(std::size_t p = 0; p < grown.size(); ++p)
        if(!rep.modes[p].pass && rep.modes[p].suggested_cutoff == layout[p].cutoff) rep.modes[p].suggested_cutoff = grown[p].cutoff;
    return rep;
}

int pump_cutoff_for(cplx alpha_p, double tail_tolerance) { return coherent_cutoff_for(std::abs(alpha_p), tail_tolerance); }

} // namespace tpg

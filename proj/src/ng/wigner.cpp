#include "tpg/ng/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/fock/hermite.hpp"
#include "tpg/util/parallel.hpp"

namespace tpg {

namespace {

double trapezoid_weight(std::span<const double> g, std::size_t i) {
    if(g.size() < 2) return 1.0;
    const double left  = i > 0 ? g[i] - g[i - 1] : 0.0;
    const double right = i + 1 < g.size() ? g[i + 1] - g[i] : 0.0;
    return 0.5 * (left + right);
}

double max_step(std::span<const double> g) {
    double s = 0;
    for(std::size_t i = 1; i < g.size(); ++i) {
        if(!(g[i] > g[i - 1])) throw UsageError("grid must be strictly increasing");
        s = std::max(s, g[i] - g[i - 1]);
    }
    return s;
}

void check_resolution(std::span<const double> g, int n_eff, const char *what) {
    const double step = max_step(g), limit = max_resolved_step(n_eff);
    if(step > limit)
        throw ResolutionError(fmt::format("{} step {:.4g} exceeds {:.4g} needed to resolve Fock level {}", what, step, limit, n_eff));
}

// Dense copy of a single-mode rho over levels 0..levels-1.
MatrixXc level_matrix(const DensityOperator &rho, int levels) {
    MatrixXc    m = MatrixXc::Zero(levels, levels);
    const auto &sup = rho.support();
    for(std::size_t r = 0; r < sup.size(); ++r)
        for(std::size_t c = 0; c < sup.size(); ++c)
            m(sup[r], sup[c]) = rho.matrix()(static_cast<index_t>(r), static_cast<index_t>(c));
    return m;
}

int top_level(const DensityOperator &rho, std::size_t pos) {
    int top = 0;
    for(auto idx : rho.support()) top = std::max(top, rho.layout().level(idx, pos));
    return top;
}

} // namespace

double WignerGrid::integral() const {
    double s = 0;
    for(std::size_t i = 0; i < axis0.size(); ++i)
        for(std::size_t j = 0; j < axis1.size(); ++j)
            s += values(static_cast<index_t>(i), static_cast<index_t>(j)) * trapezoid_weight(axis0, i) * trapezoid_weight(axis1, j);
    return s;
}

std::string WignerGrid::to_csv() const {
    std::string out = fmt::format("{}\\{}", axis_names[0], axis_names[1]);
    for(double v : axis1) out += fmt::format(",{:.17g}", v);
    out += '\n';
    for(std::size_t i = 0; i < axis0.size(); ++i) {
        out += fmt::format("{:.17g}", axis0[i]);
        for(std::size_t j = 0; j < axis1.size(); ++j) out += fmt::format(",{:.17g}", values(static_cast<index_t>(i), static_cast<index_t>(j)));
        out += '\n';
    }
    return out;
}

MatrixXc wigner_kernel(int levels, double x, double p) {
    MatrixXc   k(levels, levels);
    const cplx a{x / std::sqrt(2.0), p / std::sqrt(2.0)};
    const cplx two_a = 2.0 * a, two_ac = std::conj(two_a);
    // Upper triangle U(m, n), m <= n; lower triangle by conjugation.
    k(0, 0) = std::exp(-(x * x + p * p)) / pi;
    for(int n = 1; n < levels; ++n) k(0, n) = two_a * k(0, n - 1) / std::sqrt(double(n));
    for(int m = 1; m < levels; ++m) {
        const double sm = std::sqrt(double(m));
        k(m, m)         = (two_ac * k(m - 1, m) - sm * k(m - 1, m - 1)) / sm;
        for(int n = m + 1; n < levels; ++n) k(m, n) = (two_a * k(m, n - 1) - sm * k(m - 1, n - 1)) / std::sqrt(double(n));
    }
    for(int m = 1; m < levels; ++m)
        for(int n = 0; n < m; ++n) k(m, n) = std::conj(k(n, m));
    return k;
}

int effective_level(const DensityOperator &rho, std::size_t pos, double weight) {
    std::vector<double> pn(static_cast<std::size_t>(rho.layout()[pos].cutoff), 0.0);
    const auto         &sup = rho.support();
    for(std::size_t i = 0; i < sup.size(); ++i)
        pn[static_cast<std::size_t>(rho.layout().level(sup[i], pos))] += rho.matrix()(static_cast<index_t>(i), static_cast<index_t>(i)).real();
    int top = 0;
    for(std::size_t n = 0; n < pn.size(); ++n)
        if(pn[n] > weight) top = static_cast<int>(n);
    return top;
}

double max_resolved_step(int n_eff) { return pi / (2 * std::sqrt(2.0 * n_eff + 1)); }

std::vector<double> quadrature_marginal(const DensityOperator &rho, std::span<const double> x_grid) {
    if(rho.layout().size() != 1) throw UsageError("quadrature_marginal needs a single-mode state");
    const int n_eff = effective_level(rho, 0);
    check_resolution(x_grid, n_eff, "quadrature grid");
    const int       levels = top_level(rho, 0) + 1;
    const MatrixXc  m      = level_matrix(rho, levels);
    const auto      h      = hermite_table(levels, x_grid);
    std::vector<double> out(x_grid.size());
    for(std::size_t i = 0; i < x_grid.size(); ++i) {
        const Eigen::VectorXd psi = h.row(static_cast<index_t>(i)).transpose();
        out[i]                    = (psi.transpose().cast<cplx>() * m * psi.cast<cplx>()).value().real();
    }
    const double reach = std::sqrt(2.0 * n_eff + 1) + 3;
    if(x_grid.size() > 1 && x_grid.front() <= -reach && x_grid.back() >= reach) {
        double norm = 0;
        for(std::size_t i = 0; i < out.size(); ++i) norm += out[i] * trapezoid_weight(x_grid, i);
        if(std::abs(norm - rho.trace()) > 1e-2) throw ResolutionError(fmt::format("marginal integrates to {:.6f}; grid too coarse", norm));
    }
    return out;
}

WignerGrid wigner_single(const DensityOperator &rho, std::span<const double> x_grid, std::span<const double> p_grid) {
    if(rho.layout().size() != 1) throw UsageError("wigner_single needs a single-mode state");
    const int n_eff = effective_level(rho, 0);
    check_resolution(x_grid, n_eff, "x grid");
    check_resolution(p_grid, n_eff, "p grid");
    const int      levels = top_level(rho, 0) + 1;
    const MatrixXc m      = level_matrix(rho, levels);
    WignerGrid     w{{"X", "P"}, {x_grid.begin(), x_grid.end()}, {p_grid.begin(), p_grid.end()},
                     Eigen::MatrixXd(static_cast<index_t>(x_grid.size()), static_cast<index_t>(p_grid.size()))};
    for(std::size_t i = 0; i < x_grid.size(); ++i)
        for(std::size_t j = 0; j < p_grid.size(); ++j)
            w.values(static_cast<index_t>(i), static_cast<index_t>(j)) = m.cwiseProduct(wigner_kernel(levels, x_grid[i], p_grid[j])).sum().real();
    return w;
}

std::string to_string(PhaseAxis a) {
    static const char *names[] = {"X_A", "P_A", "X_B", "P_B"};
    return names[static_cast<int>(a)];
}

WignerGrid wigner_slice(const DensityOperator &rho, const SlicePlane &plane, std::span<const double> grid0,
                        std::span<const double> grid1, int threads) {
    if(rho.layout().size() != 2) throw UsageError("wigner_slice needs a two-mode state");
    if(plane.first == plane.second) throw UsageError("wigner_slice: the two varying coordinates must differ");
    const int n0 = effective_level(rho, 0), n1 = effective_level(rho, 1);
    const int n_first  = static_cast<int>(plane.first) < 2 ? n0 : n1;
    const int n_second = static_cast<int>(plane.second) < 2 ? n0 : n1;
    check_resolution(grid0, n_first, "slice axis");
    check_resolution(grid1, n_second, "slice axis");

    const int   la = top_level(rho, 0) + 1, lb = top_level(rho, 1) + 1;
    const auto &sup = rho.support();
    std::vector<std::pair<int, int>> lv;
    for(auto idx : sup) lv.emplace_back(rho.layout().level(idx, 0), rho.layout().level(idx, 1));

    WignerGrid w{{to_string(plane.first), to_string(plane.second)}, {grid0.begin(), grid0.end()}, {grid1.begin(), grid1.end()},
                 Eigen::MatrixXd(static_cast<index_t>(grid0.size()), static_cast<index_t>(grid1.size()))};
    util::parallel_for(grid0.size(), threads, [&](std::size_t i) {
        for(std::size_t j = 0; j < grid1.size(); ++j) {
            auto c = plane.fixed;
            c[static_cast<std::size_t>(plane.first)]  = grid0[i];
            c[static_cast<std::size_t>(plane.second)] = grid1[j];
            const MatrixXc ka = wigner_kernel(la, c[0], c[1]);
            const MatrixXc kb = wigner_kernel(lb, c[2], c[3]);
            cplx           s{};
            for(std::size_t r = 0; r < sup.size(); ++r)
                for(std::size_t q = 0; q < sup.size(); ++q)
                    s += rho.matrix()(static_cast<index_t>(r), static_cast<index_t>(q)) * ka(lv[r].first, lv[q].first) *
                         kb(lv[r].second, lv[q].second);
            w.values(static_cast<index_t>(i), static_cast<index_t>(j)) = s.real();
        }
    });
    return w;
}

namespace {

struct AbcLevels {
    std::size_t pa, pb, pc;
    int         la = 1, lb = 1, lc = 1;
};

AbcLevels abc_positions(const ModeLayout &layout) {
    AbcLevels l{layout.require(Mode::A), layout.require(Mode::B), layout.require(Mode::C)};
    l.la = layout[l.pa].cutoff;
    l.lb = layout[l.pb].cutoff;
    l.lc = layout[l.pc].cutoff;
    return l;
}

} // namespace

std::vector<double> joint_quadrature_density(const StateVector &psi, std::span<const double> xa, std::span<const double> xb,
                                             std::span<const double> xc) {
    const auto &layout = psi.layout();
    const auto  pos    = abc_positions(layout);
    const auto  ha = hermite_table(pos.la, xa), hb = hermite_table(pos.lb, xb), hc = hermite_table(pos.lc, xc);

    // Group amplitudes by the remaining modes; each group is one coherent sum.
    struct Term {
        int  a, b, c;
        cplx amp;
    };
    std::map<index_t, std::vector<Term>> groups;
    for(const auto &e : psi.entries()) {
        index_t rest = 0;
        for(std::size_t p = 0; p < layout.size(); ++p)
            if(p != pos.pa && p != pos.pb && p != pos.pc) rest = rest * layout[p].cutoff + layout.level(e.index, p);
        groups[rest].push_back({layout.level(e.index, pos.pa), layout.level(e.index, pos.pb), layout.level(e.index, pos.pc), e.amplitude});
    }
    std::vector<double> out(xa.size() * xb.size() * xc.size(), 0.0);
    std::vector<cplx>   amp(xc.size());
    for(const auto &[key, terms] : groups)
        for(std::size_t i = 0; i < xa.size(); ++i)
            for(std::size_t j = 0; j < xb.size(); ++j) {
                std::fill(amp.begin(), amp.end(), cplx{});
                for(const auto &t : terms) {
                    const cplx f = t.amp * ha(static_cast<index_t>(i), t.a) * hb(static_cast<index_t>(j), t.b);
                    if(f == cplx{}) continue;
                    for(std::size_t k = 0; k < xc.size(); ++k) amp[k] += f * hc(static_cast<index_t>(k), t.c);
                }
                for(std::size_t k = 0; k < xc.size(); ++k) out[(i * xb.size() + j) * xc.size() + k] += std::norm(amp[k]);
            }
    return out;
}

std::vector<double> joint_quadrature_density(const DensityOperator &rho, std::span<const double> xa, std::span<const double> xb,
                                             std::span<const double> xc) {
    const auto &layout = rho.layout();
    if(layout.size() != 3) throw UsageError("joint_quadrature_density needs a three-mode density operator");
    const auto pos = abc_positions(layout);
    const auto ha = hermite_table(pos.la, xa), hb = hermite_table(pos.lb, xb), hc = hermite_table(pos.lc, xc);
    const auto &sup = rho.support();
    std::vector<std::array<int, 3>> lv;
    for(auto idx : sup) lv.push_back({layout.level(idx, pos.pa), layout.level(idx, pos.pb), layout.level(idx, pos.pc)});
    std::vector<double> out(xa.size() * xb.size() * xc.size(), 0.0);
    const auto          s = static_cast<index_t>(sup.size());
    VectorXc            f(s);
    for(std::size_t i = 0; i < xa.size(); ++i)
        for(std::size_t j = 0; j < xb.size(); ++j)
            for(std::size_t k = 0; k < xc.size(); ++k) {
                for(index_t r = 0; r < s; ++r) {
                    const auto &l = lv[static_cast<std::size_t>(r)];
                    f[r] = ha(static_cast<index_t>(i), l[0]) * hb(static_cast<index_t>(j), l[1]) * hc(static_cast<index_t>(k), l[2]);
                }
                out[(i * xb.size() + j) * xc.size() + k] = (f.transpose() * rho.matrix() * f).value().real();
            }
    return out;
}

} // namespace tpg

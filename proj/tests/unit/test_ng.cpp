#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "tpg/baselines/baselines.hpp"
#include "tpg/errors.hpp"
#include "tpg/gaussian/covariance.hpp"
#include "tpg/ng/measures.hpp"
#include "tpg/ng/wigner.hpp"

using namespace tpg;

namespace {

// W_{|m><n|} for m >= n from the associated-Laguerre closed form.
cplx laguerre_kernel(int m, int n, double x, double p) {
    const double r2 = x * x + p * p;
    double       ratio = 1;
    for(int k = n + 1; k <= m; ++k) ratio /= k;
    const cplx z = std::pow(cplx{std::sqrt(2.0) * x, -std::sqrt(2.0) * p}, m - n);
    return (n % 2 ? -1.0 : 1.0) / pi * std::sqrt(ratio) * z * std::exp(-r2) * std::assoc_laguerre(n, m - n, 2 * r2);
}

DensityOperator single_mode(const StateVector &psi) { return DensityOperator::pure(psi); }

} // namespace

TEST_CASE("von Neumann entropy") {
    CHECK(std::abs(von_neumann_entropy(single_mode(coherent_state(20, 1.3)))) < 1e-8);
    const auto l = ModeLayout::uniform("A", 2);
    CHECK(von_neumann_entropy(DensityOperator::from_dense(l, MatrixXc::Identity(2, 2) / 2.0)) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(von_neumann_entropy(DensityOperator::from_dense(l, MatrixXc::Identity(2, 2))), InvalidStateError);
    const auto ra = partial_trace(fixtures::sodc_state(0.3), {Mode::A});
    CHECK(std::abs(von_neumann_entropy(ra) - 0.3174266) < 1e-5);
    CHECK(std::abs(von_neumann_entropy(partial_trace(fixtures::sodc_state(0.5), {Mode::A})) - tmsv_entropy(0.5)) < 1e-6);
}

TEST_CASE("non-Gaussianity of Gaussian and triple-photon states") {
    for(double xi : {0.1, 0.3, 0.5, 0.7}) {
        const auto s = fixtures::sodc_state(xi);
        CHECK(qre(s, {Mode::A, Mode::B}) <= 1e-6);
        CHECK(qre(s, {Mode::A}) <= 1e-6);
    }
    double prev = 0;
    for(double xi : {0.1, 0.3, 0.5, 0.7}) {
        const auto  &s   = fixtures::tps_state(xi);
        const double abc = qre(s, {Mode::A, Mode::B, Mode::C}), ab = qre(s, {Mode::A, Mode::B}), a = qre(s, {Mode::A});
        CHECK(abc > prev);
        prev = abc;
        if(xi >= 0.3) {
            CHECK(abc > ab);
            CHECK(ab > a);
            CHECK(a > 0);
        }
    }
}

TEST_CASE("logarithmic negativity") {
    const auto l   = ModeLayout::uniform("AB", 3);
    const auto phi = StateVector::from_dense(ModeLayout::uniform("A", 3), (VectorXc(3) << 0.6, 0.8, 0).finished());
    const auto chi = StateVector::from_dense(ModeLayout::uniform("B", 3), (VectorXc(3) << 0, cplx{0, 1}, 0).finished());
    CHECK(log_negativity(DensityOperator::pure(tensor(phi, chi)), {Mode::A}) < 1e-8);
    (void)l;

    CHECK(std::abs(log_negativity(partial_trace(fixtures::sodc_state(0.3), {Mode::A, Mode::B}), {Mode::A}) - 0.6) < 1e-4);
    CHECK(std::abs(log_negativity(partial_trace(fixtures::sodc_state(0.5), {Mode::A, Mode::B}), {Mode::A}) - tmsv_log_negativity(0.5)) < 1e-4);

    for(double xi : {0.3, 0.5, 0.7}) {
        const auto &s = fixtures::tps_state(xi);
        CHECK(log_negativity(partial_trace(s, {Mode::A, Mode::B}), {Mode::A}) <= 1e-4);
        CHECK(log_negativity(partial_trace(s, {Mode::A, Mode::B, Mode::C}), {Mode::A}) > tmsv_log_negativity(xi));
    }

    // invariance under local phase rotations
    const auto     rho = partial_trace(fixtures::sodc_state(0.4, 30), {Mode::A, Mode::B});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0, 2 * pi);
    const double    ta = ang(rng), tb = ang(rng);
    MatrixXc        rot = rho.matrix();
    for(std::size_t r = 0; r < rho.support().size(); ++r)
        for(std::size_t c = 0; c < rho.support().size(); ++c) {
            const auto  &lay = rho.layout();
            const double phase = ta * (lay.level(rho.support()[r], 0) - lay.level(rho.support()[c], 0)) +
                                 tb * (lay.level(rho.support()[r], 1) - lay.level(rho.support()[c], 1));
            rot(static_cast<index_t>(r), static_cast<index_t>(c)) *= std::exp(cplx{0, phase});
        }
    const DensityOperator rotated(rho.layout(), rho.support(), rot);
    CHECK(std::abs(log_negativity(rotated, {Mode::A}) - log_negativity(rho, {Mode::A})) < 1e-8);
}

TEST_CASE("photon statistics") {
    const auto coh = photon_statistics(single_mode(coherent_state(40, 1.5)));
    REQUIRE(coh.mandel_q.has_value());
    CHECK(std::abs(*coh.mandel_q) < 1e-6);
    CHECK_FALSE(photon_statistics(single_mode(coherent_state(4, 0.0))).mandel_q.has_value());

    const auto th = photon_statistics(partial_trace(fixtures::sodc_state(0.3), {Mode::A}));
    CHECK(std::abs(*th.mandel_q - 0.092733) < 1e-5);

    for(double xi : {0.3, 0.5, 0.7}) {
        const auto ra = partial_trace(fixtures::tps_state(xi), {Mode::A});
        const auto st = photon_statistics(ra);
        CHECK(*st.mandel_q > 0);
        CHECK(std::abs(st.mean_n - expectation(SparseOperator::number(ra.layout(), Mode::A), ra).real()) < 1e-10);
    }

    // geometric law for SODC, curvature for TPS
    const auto sodc = photon_statistics(partial_trace(fixtures::sodc_state(0.5), {Mode::A}));
    for(int n = 1; n < 12; ++n) CHECK(std::abs(std::log(sodc.pn[n + 1]) - 2 * std::log(sodc.pn[n]) + std::log(sodc.pn[n - 1])) <= 1e-4);
    const auto tps = photon_statistics(partial_trace(fixtures::tps_state(0.5), {Mode::A}));
    double     worst = 0;
    for(int n = 1; n < 8; ++n) worst = std::max(worst, std::abs(std::log(tps.pn[n + 1]) - 2 * std::log(tps.pn[n]) + std::log(tps.pn[n - 1])));
    CHECK(worst > 0.01);
}

TEST_CASE("Wigner kernel against Laguerre closed form") {
    for(auto [x, p] : {std::pair{0.0, 0.0}, {0.7, -1.1}, {-2.3, 0.4}, {3.0, 2.5}}) {
        const MatrixXc k = wigner_kernel(12, x, p);
        for(int m = 0; m < 12; ++m)
            for(int n = 0; n <= m; ++n) {
                const cplx oracle = laguerre_kernel(m, n, x, p);
                CHECK(std::abs(k(m, n) - oracle) < 1e-12);
            }
    }
    CHECK(wigner_kernel(2, 0, 0)(0, 0).real() == doctest::Approx(1 / pi).epsilon(1e-12));
    CHECK(wigner_kernel(2, 0, 0)(1, 1).real() == doctest::Approx(-1 / pi).epsilon(1e-12));
}

TEST_CASE("single-mode Wigner function and marginals") {
    const auto g = fixtures::grid(-8, 8, 0.1);
    const auto vac = single_mode(coherent_state(1, 0.0));
    const auto pv  = quadrature_marginal(vac, g);
    for(std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(pv[i] - std::exp(-g[i] * g[i]) / std::sqrt(pi)) < 1e-10);

    // coherent state: Gaussian centred at sqrt2 (Re, Im)
    const cplx alpha{0.8, -0.5};
    const auto w = wigner_single(single_mode(coherent_state(30, alpha)), std::vector<double>{std::sqrt(2.0) * 0.8}, std::vector<double>{-std::sqrt(2.0) * 0.5});
    CHECK(w.values(0, 0) == doctest::Approx(1 / pi).epsilon(1e-8));

    const auto ra = partial_trace(fixtures::tps_state(0.5), {Mode::A});
    const auto wa = wigner_single(ra, g, g);
    CHECK(std::abs(wa.integral() - 1) < 1e-3);
    const auto marg = quadrature_marginal(ra, g);
    double     worst = 0;
    for(std::size_t i = 0; i < g.size(); ++i) {
        double s = 0;
        for(std::size_t j = 0; j < g.size(); ++j) s += wa.values(static_cast<index_t>(i), static_cast<index_t>(j)) * (j == 0 || j + 1 == g.size() ? 0.05 : 0.1);
        worst = std::max(worst, std::abs(s - marg[i]));
    }
    CHECK(worst <= 1e-6);

    // super-Gaussian marginal at xi = 0.7
    const auto m7 = quadrature_marginal(partial_trace(fixtures::tps_state(0.7), {Mode::A}), g);
    double     m2 = 0, m4 = 0;
    for(std::size_t i = 0; i < g.size(); ++i) {
        m2 += g[i] * g[i] * m7[i] * 0.1;
        m4 += std::pow(g[i], 4) * m7[i] * 0.1;
    }
    CHECK(m4 / (m2 * m2) - 3 > 0);

    CHECK_THROWS_AS(quadrature_marginal(ra, fixtures::grid(-8, 8, 1.0)), ResolutionError);
    CHECK_THROWS_AS(wigner_single(ra, fixtures::grid(-8, 8, 1.0), g), ResolutionError);
}

TEST_CASE("two-mode Wigner slices") {
    const auto     l   = ModeLayout::uniform("AB", 1);
    const auto     vac = DensityOperator::pure(StateVector::vacuum(l));
    const std::vector<double> zero{0.0};
    const auto w = wigner_slice(vac, {PhaseAxis::XA, PhaseAxis::XB, {}}, zero, zero);
    CHECK(w.values(0, 0) == doctest::Approx(1 / (pi * pi)).epsilon(1e-8));

    const auto phi = coherent_state(20, cplx{0.5, 0.2}, 1e-8, Mode::A);
    const auto chi = StateVector::from_dense(ModeLayout::uniform("B", 3), (VectorXc(3) << 0.6, 0, 0.8).finished());
    const auto prod = DensityOperator::pure(tensor(phi, chi));
    const auto g    = fixtures::grid(-2, 2, 0.25);
    const auto s    = wigner_slice(prod, {PhaseAxis::PA, PhaseAxis::XB, {0.3, 0, 0, -0.4}}, g, g);
    const auto wa   = wigner_single(DensityOperator::pure(phi), std::vector<double>{0.3}, g);
    const auto wb   = wigner_single(DensityOperator::pure(chi), g, std::vector<double>{-0.4});
    for(std::size_t i = 0; i < g.size(); ++i)
        for(std::size_t j = 0; j < g.size(); ++j)
            CHECK(std::abs(s.values(static_cast<index_t>(i), static_cast<index_t>(j)) -
                           wa.values(0, static_cast<index_t>(i)) * wb.values(static_cast<index_t>(j), 0)) < 1e-8);
}

TEST_CASE("joint quadrature density") {
    const auto g   = fixtures::grid(-2, 2, 0.5);
    const auto vac = joint_quadrature_density(StateVector::vacuum(ModeLayout::uniform("ABC", 2)), g, g, g);
    const auto n   = g.size();
    for(std::size_t i = 0; i < n; ++i)
        for(std::size_t j = 0; j < n; ++j)
            for(std::size_t k = 0; k < n; ++k)
                CHECK(std::abs(vac[(i * n + j) * n + k] - std::exp(-g[i] * g[i] - g[j] * g[j] - g[k] * g[k]) / std::pow(pi, 1.5)) < 1e-14);

    const auto fine = fixtures::grid(-6, 6, 0.2);
    const auto &s   = fixtures::tps_state(0.3);
    const auto dens = joint_quadrature_density(s, fine, fine, fine);
    const auto m    = fine.size();
    double     total = 0, perm = 0;
    for(std::size_t i = 0; i < m; ++i)
        for(std::size_t j = 0; j < m; ++j)
            for(std::size_t k = 0; k < m; ++k) {
                const double v = dens[(i * m + j) * m + k];
                total += v * 0.008;
                CHECK(v >= 0);
                perm = std::max({perm, std::abs(v - dens[(j * m + i) * m + k]), std::abs(v - dens[(k * m + j) * m + i])});
            }
    CHECK(std::abs(total - 1) < 1e-3);
    CHECK(perm < 1e-8);

    // density-operator path agrees with the pure-state path
    const auto coarse = fixtures::grid(-3, 3, 0.75);
    const auto a      = joint_quadrature_density(s, coarse, coarse, coarse);
    const auto b      = joint_quadrature_density(partial_trace(s, {Mode::A, Mode::B, Mode::C}), coarse, coarse, coarse);
    for(std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
}

TEST_CASE("fidelity against a density matrix with a different cutoff") {
    const auto lp  = ModeLayout::uniform("AB", 3);
    const auto lr  = ModeLayout::uniform("AB", 5);
    const int  o00[] = {0, 0}, o11[] = {1, 1}, o22[] = {2, 2};
    StateVector phi(lp, {{lp.index(o00), cplx{0.6}}, {lp.index(o11), cplx{0, 0.8}}});
    StateVector psi(lr, {{lr.index(o00), cplx{0.8}}, {lr.index(o11), cplx{0, 0.6}}});
    // |<phi|psi>|^2 = (0.48 + 0.48)^2
    CHECK(std::abs(fidelity(phi, DensityOperator::pure(psi)) - 0.9216) < 1e-14);
    StateVector chi(lr, {{lr.index(o22), cplx{1.0}}});
    CHECK(std::abs(fidelity(phi, DensityOperator::pure(chi))) < 1e-15);
    CHECK_THROWS_AS((void)fidelity(phi, DensityOperator::pure(StateVector::vacuum(ModeLayout::uniform("AC", 3)))), UsageError);
}

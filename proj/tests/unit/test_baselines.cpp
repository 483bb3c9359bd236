#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tpg/baselines/baselines.hpp"
#include "tpg/errors.hpp"
#include "tpg/gaussian/covariance.hpp"
#include "tpg/ng/measures.hpp"

using namespace tpg;

namespace {

// Bose-Einstein entropy with mean photon number n.
double thermal_entropy(double n) { return (n + 1) * std::log(n + 1) - n * std::log(n); }

} // namespace

TEST_CASE("two-mode squeezed vacuum closed forms") {
    CHECK(tmsv_entropy(0) == 0);
    CHECK(std::abs(tmsv_entropy(0.3) - thermal_entropy(std::pow(std::sinh(0.3), 2))) < 1e-12);
    CHECK(std::abs(tmsv_entropy(0.3) - 0.3174266) < 1e-6);
    CHECK(std::abs(tmsv_photon_dist(0.3, 0) - 0.915137) < 1e-6);
    double total = 0;
    for(int n = 0; n <= 40; ++n) total += tmsv_photon_dist(0.5, n);
    CHECK(std::abs(total - 1) < 1e-10);
    for(int n = 1; n < 20; ++n)
        CHECK(std::abs(std::log(tmsv_photon_dist(0.4, n + 1)) - 2 * std::log(tmsv_photon_dist(0.4, n)) + std::log(tmsv_photon_dist(0.4, n - 1))) < 1e-12);
    CHECK(tmsv_log_negativity(0) == 0);
    CHECK(tmsv_log_negativity(0.3) == doctest::Approx(0.6));
    CHECK_THROWS_AS(tmsv_entropy(-0.1), UsageError);

    for(double xi : {0.1, 0.3, 0.5, 0.7}) {
        const auto s  = fixtures::sodc_state(xi);
        const auto ra = partial_trace(s, {Mode::A});
        CHECK(std::abs(von_neumann_entropy(ra) - tmsv_entropy(xi)) < 1e-6);
        CHECK(std::abs(log_negativity(partial_trace(s, {Mode::A, Mode::B}), {Mode::A}) - tmsv_log_negativity(xi)) < 1e-4);
        for(int n = 0; n < 15; ++n) {
            const int occ[] = {n};
            CHECK(std::abs(ra.element(ra.layout().index(occ), ra.layout().index(occ)).real() - tmsv_photon_dist(xi, n)) < 1e-6);
        }
    }
}

TEST_CASE("perturbative triple-photon state") {
    const auto p0 = perturbative_tps(0);
    CHECK(p0.state.nonzeros() == 1);
    CHECK(p0.state.amplitude(0) == cplx{1.0});

    const auto p = perturbative_tps(0.2);
    const int  o0[] = {0, 0, 0}, o1[] = {1, 1, 1}, o2[] = {2, 2, 2};
    const auto &l = p.state.layout();
    CHECK(std::abs(p.state.amplitude(l.index(o1)) / p.state.amplitude(l.index(o0)) - 0.2) < 1e-14);
    CHECK(std::abs(p.state.amplitude(l.index(o2)) / p.state.amplitude(l.index(o0)) - 0.02) < 1e-14);
    CHECK(std::abs(p.state.norm() - 1) < 1e-12);
    CHECK(p.lambda_quoted == doctest::Approx(3 * 0.04 + 1.25 * 0.0016));
    CHECK(p.warnings.empty());
    CHECK_FALSE(perturbative_tps(0.5).warnings.empty());
    const auto series = perturbative_tps(0.2, PerturbativeVariant::SeriesExpansion);
    CHECK(std::abs(series.state.amplitude(l.index(o2)) / series.state.amplitude(l.index(o0)) - std::sqrt(2.0) * 0.04) < 1e-14);

    // overlap with the evolved classical-pump state
    const HamiltonianSpec spec{Process::TPG, PumpTreatment::Classical, cplx{1.0}, 1.0};
    const auto            lay = process_layout(spec, 12);
    const double          g[] = {0.1};
    const auto            evolved = evolve(build_hamiltonian(spec, lay), initial_state(spec, lay), g).states[0];
    cplx                  overlap{};
    for(const auto &e : p0.state.entries()) (void)e;
    const auto pt = perturbative_tps(0.1);
    for(const auto &e : pt.state.entries()) overlap += std::conj(e.amplitude) * evolved.amplitude(lay.index(pt.state.layout().occupation(e.index)));
    CHECK(std::norm(overlap) >= 0.999);

    // covariance is diagonal and lambda is about three times <n_A>
    const auto cov = covariance_of(pt.state, {Mode::A, Mode::B, Mode::C});
    for(int i = 0; i < 6; ++i)
        for(int j = 0; j < 6; ++j)
            if(i != j) CHECK(std::abs(cov.sigma(i, j)) < 1e-14);
    const auto rep = perturbative_variance_report(0.05);
    CHECK(rep.ratio == doctest::Approx(3.0).epsilon(0.01));
    CHECK(perturbative_best_fit_scale({0.05, 0.1, 0.2, 0.3}) > 2.5);
}

TEST_CASE("non-Gaussianity chain residual") {
    const HamiltonianSpec spec{Process::TPG, PumpTreatment::Classical, cplx{1.0}, 1.0};
    const auto            vac = qre_chain_residual(StateVector::vacuum(process_layout(spec, 3)));
    CHECK(std::abs(vac.residual) < 1e-6);
    const auto r1 = qre_chain_residual(fixtures::tps_state(0.1));
    const auto r3 = qre_chain_residual(fixtures::tps_state(0.3));
    CHECK(std::abs(r1.residual) < std::abs(r3.residual));
    CHECK(r3.lhs == doctest::Approx(r3.delta_abc - r3.delta_ab));
    CHECK(r3.rhs == doctest::Approx(r3.delta_ab - r3.delta_a));
}

#include "tpg/baselines/baselines.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/gaussian/covariance.hpp"
#include "tpg/ng/measures.hpp"

namespace tpg {

namespace {

void require_nonnegative(double xi) {
    if(!(xi >= 0)) throw UsageError("xi must be >= 0");
}

} // namespace

double tmsv_entropy(double xi) {
    require_nonnegative(xi);
    if(xi == 0) return 0;
    const double c2 = std::pow(std::cosh(xi), 2), s2 = std::pow(std::sinh(xi), 2);
    return c2 * std::log(c2) - s2 * std::log(s2);
}

double tmsv_photon_dist(double xi, int n) {
    require_nonnegative(xi);
    if(n < 0) throw UsageError("photon number must be >= 0");
    if(n == 0) return 1 / std::pow(std::cosh(xi), 2);
    return std::pow(std::tanh(xi), 2 * n) / std::pow(std::cosh(xi), 2);
}

double tmsv_log_negativity(double xi) {
    require_nonnegative(xi);
    return 2 * xi;
}

double tmsv_mean_photons(double xi) {
    require_nonnegative(xi);
    return std::pow(std::sinh(xi), 2);
}

PerturbativeTPS perturbative_tps(double xi, PerturbativeVariant variant) {
    require_nonnegative(xi);
    PerturbativeTPS p;
    p.xi            = xi;
    p.lambda_quoted = 3 * xi * xi + 1.25 * std::pow(xi, 4);
    if(xi > 0.35) p.warnings.push_back(fmt::format("xi={} is outside the perturbative window [0, 0.35]", xi));
    const auto   layout = ModeLayout::uniform("ABC", 3);
    const double c2     = variant == PerturbativeVariant::Quoted ? xi * xi / 2 : std::sqrt(2.0) * xi * xi;
    const int    o0[] = {0, 0, 0}, o1[] = {1, 1, 1}, o2[] = {2, 2, 2};
    p.state = StateVector(layout, {{layout.index(o0), 1.0}, {layout.index(o1), xi}, {layout.index(o2), c2}}).normalized();
    return p;
}

PerturbativeVarianceReport perturbative_variance_report(double xi, PerturbativeVariant variant) {
    const auto                 p = perturbative_tps(xi, variant);
    PerturbativeVarianceReport r;
    r.xi            = xi;
    r.variance      = covariance_of(p.state, {Mode::A}).sigma(0, 0);
    r.mean_photons  = r.variance - 0.5;
    r.lambda_quoted = p.lambda_quoted;
    r.ratio         = r.mean_photons > 0 ? r.lambda_quoted / r.mean_photons : 0.0;
    return r;
}

double perturbative_best_fit_scale(const std::vector<double> &xis, PerturbativeVariant variant) {
    double num = 0, den = 0;
    for(double xi : xis) {
        const auto r = perturbative_variance_report(xi, variant);
        num += r.lambda_quoted * r.mean_photons;
        den += r.mean_photons * r.mean_photons;
    }
    if(den == 0) throw UsageError("perturbative_best_fit_scale needs some xi > 0");
    return num / den;
}

QreChain qre_chain_residual(const StateVector &psi) {
    QreChain c;
    c.delta_abc = qre(psi, {Mode::A, Mode::B, Mode::C});
    c.delta_ab  = qre(psi, {Mode::A, Mode::B});
    c.delta_a   = qre(psi, {Mode::A});
    c.lhs       = c.delta_abc - c.delta_ab;
    c.rhs       = c.delta_ab - c.delta_a;
    c.residual  = c.lhs - c.rhs;
    return c;
}

} // namespace tpg

#include "tpg/gaussian/covariance.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tpg/errors.hpp"

namespace tpg {

namespace {

template<class State>
CovarianceMatrix moments(const State &state, const ModeSet &modes) {
    const auto &layout = state.layout();
    if(modes.empty()) throw UsageError("covariance_of: no modes given");
    for(std::size_t i = 1; i < modes.size(); ++i)
        if(!(modes[i - 1] < modes[i])) throw UsageError("covariance_of: modes must be distinct and in canonical order");

    const auto m = static_cast<index_t>(modes.size());
    // L = (a_1 .. a_M, a_1† .. a_M†)
    std::vector<SparseOperator> ladder;
    for(auto mode : modes) ladder.push_back(build_ladder(layout, mode));
    for(index_t i = 0; i < m; ++i) ladder.push_back(ladder[static_cast<std::size_t>(i)].adjoint());

    VectorXc first(2 * m);
    MatrixXc second(2 * m, 2 * m);
    for(index_t k = 0; k < 2 * m; ++k) first[k] = expectation(ladder[static_cast<std::size_t>(k)], state);
    for(index_t k = 0; k < 2 * m; ++k)
        for(index_t l = 0; l < 2 * m; ++l) second(k, l) = expectation(ladder[static_cast<std::size_t>(k)] * ladder[static_cast<std::size_t>(l)], state);

    // R = T L with X = (a + a†)/sqrt2, P = -i (a - a†)/sqrt2
    const double s = 1 / std::sqrt(2.0);
    MatrixXc     t = MatrixXc::Zero(2 * m, 2 * m);
    for(index_t i = 0; i < m; ++i) {
        t(2 * i, i)         = s;
        t(2 * i, m + i)     = s;
        t(2 * i + 1, i)     = cplx{0, -s};
        t(2 * i + 1, m + i) = cplx{0, s};
    }
    const VectorXc mean = t * first;
    const MatrixXc rr   = t * second * t.transpose();

    CovarianceMatrix cov{modes, mean.real(), Eigen::MatrixXd(2 * m, 2 * m)};
    cov.sigma = rr.real() - cov.mean * cov.mean.transpose();
    cov.sigma = 0.5 * (cov.sigma + cov.sigma.transpose()).eval();
    return cov;
}

std::vector<double> symplectic_from_sigma(const Eigen::MatrixXd &sigma) {
    const auto n = sigma.rows();
    if(n == 0 || n % 2 != 0 || sigma.cols() != n) throw DomainError("covariance matrix must be square with even dimension");
    if((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("covariance matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if(es.eigenvalues().minCoeff() <= 0) throw DomainError("covariance matrix is not positive definite");
    const Eigen::MatrixXd root = es.operatorSqrt();

    MatrixXc omega = MatrixXc::Zero(n, n); // i * Omega
    for(index_t i = 0; i < n; i += 2) {
        omega(i, i + 1) = cplx{0, 1};
        omega(i + 1, i) = cplx{0, -1};
    }
    const MatrixXc                          h = root.cast<cplx>() * omega * root.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<MatrixXc> hs(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd                  &ev = hs.eigenvalues(); // ascending: -nu_M .. -nu_1, nu_1 .. nu_M
    std::vector<double>                     nu;
    for(index_t i = 0; i < n / 2; ++i) {
        const double neg = -ev[n / 2 - 1 - i], pos = ev[n / 2 + i];
        if(std::abs(neg - pos) > 1e-8 * std::max(1.0, pos)) throw DomainError("symplectic spectrum failed to pair");
        nu.push_back(0.5 * (neg + pos));
    }
    std::sort(nu.begin(), nu.end());
    return nu;
}

std::size_t mode_slot(const CovarianceMatrix &cov, Mode m) {
    const auto it = std::find(cov.modes.begin(), cov.modes.end(), m);
    if(it == cov.modes.end()) throw UsageError(fmt::format("mode {} not in covariance matrix", to_char(m)));
    return static_cast<std::size_t>(it - cov.modes.begin());
}

} // namespace

CovarianceMatrix CovarianceMatrix::restricted(const ModeSet &keep) const {
    std::vector<index_t> rows;
    ModeSet              kept;
    for(auto m : modes)
        if(std::find(keep.begin(), keep.end(), m) != keep.end()) {
            const auto s = static_cast<index_t>(mode_slot(*this, m));
            rows.push_back(2 * s);
            rows.push_back(2 * s + 1);
            kept.push_back(m);
        }
    if(kept.size() != keep.size()) throw UsageError("restricted: unknown mode");
    CovarianceMatrix out{kept, Eigen::VectorXd(static_cast<index_t>(rows.size())),
                         Eigen::MatrixXd(static_cast<index_t>(rows.size()), static_cast<index_t>(rows.size()))};
    for(std::size_t i = 0; i < rows.size(); ++i) {
        out.mean[static_cast<index_t>(i)] = mean[rows[i]];
        for(std::size_t j = 0; j < rows.size(); ++j) out.sigma(static_cast<index_t>(i), static_cast<index_t>(j)) = sigma(rows[i], rows[j]);
    }
    return out;
}

std::string CovarianceMatrix::to_csv() const {
    std::string out;
    for(std::size_t i = 0; i < modes.size(); ++i) out += fmt::format("{}X_{},P_{}", i ? "," : "", to_char(modes[i]), to_char(modes[i]));
    out += '\n';
    for(index_t r = 0; r < sigma.rows(); ++r) {
        for(index_t c = 0; c < sigma.cols(); ++c) out += fmt::format("{}{:.17g}", c ? "," : "", sigma(r, c));
        out += '\n';
    }
    return out;
}

CovarianceMatrix covariance_of(const StateVector &psi, const ModeSet &modes) { return moments(psi, modes); }
CovarianceMatrix covariance_of(const DensityOperator &rho, const ModeSet &modes) { return moments(rho, modes); }

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix &cov) { return symplectic_from_sigma(cov.sigma); }

double entropy_function(double nu) {
    const double up = nu + 0.5, down = nu - 0.5;
    return (up > 0 ? up * std::log(up) : 0.0) - (down > 0 ? down * std::log(down) : 0.0);
}

double gaussian_entropy(const CovarianceMatrix &cov) {
    double s = 0;
    for(double nu : symplectic_eigenvalues(cov)) {
        if(nu < 0.5 - 1e-6) throw DomainError(fmt::format("unphysical covariance: symplectic eigenvalue {:.9f} < 1/2", nu));
        s += entropy_function(std::max(nu, 0.5));
    }
    return s;
}

double ppt_min_symplectic(const CovarianceMatrix &cov, const ModeSet &transposed) {
    if(transposed.empty() || transposed.size() >= cov.modes.size()) throw UsageError("ppt_min_symplectic: transposed set must be a proper nonempty subset");
    Eigen::MatrixXd flipped = cov.sigma;
    for(auto m : transposed) {
        const auto p = static_cast<index_t>(2 * mode_slot(cov, m) + 1);
        flipped.row(p) *= -1;
        flipped.col(p) *= -1;
    }
    return symplectic_from_sigma(flipped).front();
}

SteeringResult steering_R(const CovarianceMatrix &cov, Mode steered, Mode steering) {
    if(steered == steering) throw UsageError("steering_R: steered and steering modes must differ");
    const auto   s = static_cast<index_t>(2 * mode_slot(cov, steered)), t = static_cast<index_t>(2 * mode_slot(cov, steering));
    // Vacuum-1 units: every second moment doubles.
    const double vx_t = 2 * cov.sigma(t, t), vp_t = 2 * cov.sigma(t + 1, t + 1);
    if(vx_t < 1e-12 || vp_t < 1e-12) throw DegenerateConditioningError("steering mode has vanishing quadrature variance");
    const double cx = 2 * cov.sigma(s, t), cp = 2 * cov.sigma(s + 1, t + 1);
    SteeringResult r;
    r.gain_x = -cx / vx_t;
    r.gain_p = -cp / vp_t;
    const double inf_x = std::max(0.0, 2 * cov.sigma(s, s) - cx * cx / vx_t);
    const double inf_p = std::max(0.0, 2 * cov.sigma(s + 1, s + 1) - cp * cp / vp_t);
    r.R = std::sqrt(inf_x * inf_p);
    return r;
}

SteeringResult steering_R(const DensityOperator &rho, Mode steered, Mode steering) {
    ModeSet pair = {std::min(steered, steering), std::max(steered, steering)};
    return steering_R(covariance_of(rho, pair), steered, steering);
}

} // namespace tpg

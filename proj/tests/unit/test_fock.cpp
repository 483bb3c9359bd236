#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "tpg/errors.hpp"
#include "tpg/fock/density.hpp"
#include "tpg/fock/hermite.hpp"
#include "tpg/fock/operator.hpp"
#include "tpg/fock/snapshot.hpp"

using namespace tpg;

namespace {

MatrixXc random_density(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    MatrixXc                         m(n, n);
    for(int r = 0; r < n; ++r)
        for(int c = 0; c < n; ++c) m(r, c) = cplx{g(rng), g(rng)};
    MatrixXc rho = m * m.adjoint();
    return rho / rho.trace().real();
}

double max_abs(const MatrixXc &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("layout index round trip") {
    const ModeLayout l({{Mode::A, 3}, {Mode::B, 2}, {Mode::C, 4}});
    CHECK(l.dimension() == 24);
    for(index_t i = 0; i < l.dimension(); ++i) CHECK(l.index(l.occupation(i)) == i);
    const int occ[] = {2, 1, 3};
    CHECK(l.index(occ) == 2 * 8 + 1 * 4 + 3);
    CHECK(l.describe() == "A:3,B:2,C:4");
    CHECK_THROWS_AS(ModeLayout({{Mode::A, 0}}), ConfigurationError);
    CHECK_THROWS_AS(ModeLayout({{Mode::B, 2}, {Mode::A, 2}}), ConfigurationError);
    CHECK_THROWS_AS((void)l.require(Mode::P), ConfigurationError);
}

TEST_CASE("index splitter joins what it splits") {
    const ModeLayout    l = ModeLayout::uniform("ABCP", 3);
    const IndexSplitter s(l, {Mode::A, Mode::C});
    for(index_t i = 0; i < l.dimension(); ++i) {
        const auto [f, r] = s.split(i);
        CHECK(s.join(f, r) == i);
        const auto occ = l.occupation(i);
        CHECK(s.first().occupation(f) == std::vector<int>{occ[0], occ[2]});
    }
}

TEST_CASE("ladder action") {
    const auto l = ModeLayout::uniform("A", 3);
    const auto a = build_ladder(l, Mode::A);
    const int  two[] = {2}, zero[] = {0};
    const auto out = a.apply(StateVector::basis(l, two));
    CHECK(std::abs(out.amplitude(1) - std::sqrt(2.0)) < 1e-15);
    CHECK(out.nonzeros() == 1);
    CHECK(a.apply(StateVector::basis(l, zero)).nonzeros() == 0);
    const MatrixXc n = MatrixXc(SparseOperator::number(l, Mode::A).matrix());
    MatrixXc       expect = MatrixXc::Zero(3, 3);
    expect.diagonal() << 0, 1, 2;
    CHECK(max_abs(n - expect) < 1e-15);
    const MatrixXc ad_a = MatrixXc((a.adjoint() * a).matrix());
    CHECK(max_abs(ad_a - expect) < 1e-15);
    CHECK_THROWS_AS(build_ladder(l, Mode::B), ConfigurationError);
}

TEST_CASE("ladder acts as identity on other modes") {
    const auto     l  = ModeLayout::uniform("AB", 3);
    const MatrixXc ab = MatrixXc(build_ladder(l, Mode::B).matrix());
    Eigen::MatrixXcd a1 = Eigen::MatrixXcd::Zero(3, 3);
    a1(0, 1) = 1;
    a1(1, 2) = std::sqrt(2.0);
    const MatrixXc oracle = Eigen::kroneckerProduct(MatrixXc::Identity(3, 3), a1);
    CHECK(max_abs(ab - oracle) < 1e-15);
}

TEST_CASE("coherent state") {
    const auto vac = coherent_state(5, 0.0);
    CHECK(vac.nonzeros() == 1);
    CHECK(vac.amplitude(0) == cplx{1.0});

    const auto psi   = coherent_state(30, 1.0);
    double     mean  = 0;
    double     poisson_mean = 0, p = std::exp(-1.0);
    for(int n = 0; n < 30; ++n) {
        mean += n * std::norm(psi.amplitude(n));
        poisson_mean += n * p;
        p /= (n + 1);
    }
    CHECK(std::abs(mean - poisson_mean) < 1e-8);
    CHECK(std::abs(mean - 1.0) < 1e-8);
    CHECK(std::abs(psi.norm() - 1) < 1e-12);

    try {
        (void)coherent_state(16, 4.0);
        FAIL("expected truncation error");
    } catch(const TruncationError &e) {
        REQUIRE(e.required_cutoff().has_value());
        CHECK(*e.required_cutoff() > 16);
        CHECK(coherent_tail_mass(4.0, *e.required_cutoff()) < coherent_tail_tolerance);
        CHECK(coherent_tail_mass(4.0, *e.required_cutoff() - 1) >= coherent_tail_tolerance);
    }
}

TEST_CASE("partial trace of simple states") {
    const auto l = ModeLayout::uniform("AB", 2);
    const int  o00[] = {0, 0}, o11[] = {1, 1};
    const auto bell  = StateVector(l, {{l.index(o00), 1 / std::sqrt(2.0)}, {l.index(o11), 1 / std::sqrt(2.0)}});
    const auto rho_a = partial_trace(bell, {Mode::A});
    CHECK(max_abs(rho_a.to_dense() - MatrixXc::Identity(2, 2) / 2.0) < 1e-15);
    CHECK_THROWS_AS(partial_trace(bell, {}), UsageError);

    const ModeLayout la = ModeLayout::uniform("A", 3), lb = ModeLayout::uniform("B", 2);
    const auto       phi = StateVector::from_dense(la, (VectorXc(3) << 0.6, cplx{0, 0.8}, 0).finished());
    const auto       chi = StateVector::from_dense(lb, (VectorXc(2) << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0)).finished());
    const auto       red = partial_trace(tensor(phi, chi), {Mode::A}).to_dense();
    const VectorXc   pv  = phi.to_dense();
    CHECK(max_abs(red - pv * pv.adjoint()) < 1e-15);
}

TEST_CASE("partial trace is linear and trace preserving on random inputs") {
    std::mt19937_64  rng(7);
    const ModeLayout l({{Mode::A, 2}, {Mode::B, 3}, {Mode::C, 2}});
    const MatrixXc   r1 = random_density(12, rng), r2 = random_density(12, rng);
    const auto       d1 = DensityOperator::from_dense(l, r1), d2 = DensityOperator::from_dense(l, r2);
    const auto       mix = DensityOperator::from_dense(l, 0.3 * r1 + 0.7 * r2);
    for(const ModeSet keep : {ModeSet{Mode::A}, ModeSet{Mode::B, Mode::C}, ModeSet{Mode::A, Mode::C}}) {
        const auto t1 = partial_trace(d1, keep), t2 = partial_trace(d2, keep), tm = partial_trace(mix, keep);
        CHECK(std::abs(tm.trace() - 1) < 1e-10);
        CHECK(max_abs(tm.to_dense() - (0.3 * t1.to_dense() + 0.7 * t2.to_dense())) < 1e-12);
    }
    // Oracle: explicit sum over the traced index for keep = {B}.
    const auto rb = partial_trace(d1, {Mode::B}).to_dense();
    MatrixXc   oracle = MatrixXc::Zero(3, 3);
    for(int a = 0; a < 2; ++a)
        for(int c = 0; c < 2; ++c)
            for(int b1 = 0; b1 < 3; ++b1)
                for(int b2 = 0; b2 < 3; ++b2) oracle(b1, b2) += r1(a * 6 + b1 * 2 + c, a * 6 + b2 * 2 + c);
    CHECK(max_abs(rb - oracle) < 1e-14);
}

TEST_CASE("partial transpose") {
    const auto l = ModeLayout::uniform("AB", 2);
    const int  o00[] = {0, 0}, o11[] = {1, 1};
    const auto bell  = DensityOperator::pure(StateVector(l, {{l.index(o00), 1 / std::sqrt(2.0)}, {l.index(o11), 1 / std::sqrt(2.0)}}));
    const auto pt    = partial_transpose(bell, {Mode::A});
    // 4x4 oracle
    MatrixXc full = bell.to_dense(), oracle(4, 4);
    for(int a1 = 0; a1 < 2; ++a1)
        for(int b1 = 0; b1 < 2; ++b1)
            for(int a2 = 0; a2 < 2; ++a2)
                for(int b2 = 0; b2 < 2; ++b2) oracle(a1 * 2 + b1, a2 * 2 + b2) = full(a2 * 2 + b1, a1 * 2 + b2);
    CHECK(max_abs(pt.to_dense() - oracle) < 1e-15);
    const auto ev = hermitian_eigenvalues(pt.matrix);
    CHECK(ev.front() == doctest::Approx(-0.5));
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(oracle);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-0.5));

    CHECK_THROWS_AS(partial_transpose(bell, {Mode::A, Mode::B}), UsageError);
    CHECK_THROWS_AS(partial_transpose(bell, {}), UsageError);

    std::mt19937_64  rng(11);
    const ModeLayout l3({{Mode::A, 2}, {Mode::B, 3}, {Mode::C, 2}});
    const auto       rho = DensityOperator::from_dense(l3, random_density(12, rng));
    for(const ModeSet t : {ModeSet{Mode::A}, ModeSet{Mode::B}, ModeSet{Mode::A, Mode::C}}) {
        const auto once = partial_transpose(rho, t);
        const auto twice = partial_transpose(once, t);
        const MatrixXc d1 = once.to_dense();
        CHECK(max_abs(d1 - d1.adjoint()) < 1e-15);
        CHECK(std::abs(once.trace() - 1.0) < 1e-12);
        CHECK(max_abs(twice.to_dense() - rho.to_dense()) == 0);
    }

    // product state: spectrum unchanged
    const auto prod = DensityOperator::from_dense(l, Eigen::kroneckerProduct(random_density(2, rng), random_density(2, rng)).eval());
    auto       e0   = prod.eigenvalues();
    auto       e1   = hermitian_eigenvalues(partial_transpose(prod, {Mode::B}).matrix);
    REQUIRE(e0.size() == e1.size());
    for(std::size_t i = 0; i < e0.size(); ++i) CHECK(std::abs(e0[i] - e1[i]) < 1e-12);
}

TEST_CASE("density validation") {
    const auto l = ModeLayout::uniform("A", 2);
    MatrixXc   bad(2, 2);
    bad << 0.5, 0.3, 0.0, 0.5;
    CHECK_THROWS_AS(DensityOperator::from_dense(l, bad).validate(), InvalidStateError);
    MatrixXc neg(2, 2);
    neg << 1.2, 0, 0, -0.2;
    CHECK_THROWS_AS(DensityOperator::from_dense(l, neg).validate(), InvalidStateError);
    CHECK_NOTHROW(DensityOperator::pure(coherent_state(2, 0.0)).validate());
}

TEST_CASE("reachable subspace and restriction") {
    const auto l   = ModeLayout::uniform("AB", 4);
    const auto a   = build_ladder(l, Mode::A), b = build_ladder(l, Mode::B);
    const auto gen = a.adjoint() * b.adjoint() - a * b;
    const index_t seed[] = {0};
    const auto    basis  = gen.reachable(seed, 100);
    CHECK(basis.size() == 4); // |00>,|11>,|22>,|33>
    const MatrixXc full = MatrixXc(gen.matrix());
    const MatrixXc sub  = MatrixXc(gen.restricted(basis));
    for(std::size_t r = 0; r < 4; ++r)
        for(std::size_t c = 0; c < 4; ++c) CHECK(sub(static_cast<index_t>(r), static_cast<index_t>(c)) == full(basis[r], basis[c]));
    CHECK_THROWS_AS((void)gen.reachable(seed, 2), NumericalFailure);
}

TEST_CASE("hermite functions are orthonormal") {
    std::vector<double> xs;
    const double        dx = 0.01;
    for(double x = -12; x <= 12; x += dx) xs.push_back(x);
    const auto      t    = hermite_table(20, xs);
    Eigen::MatrixXd gram = t.transpose() * t * dx;
    CHECK((gram - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
    // psi_1(x) = sqrt(2) pi^{-1/4} x e^{-x^2/2}
    const auto h = hermite_functions(3, 0.7);
    CHECK(h[1] == doctest::Approx(std::sqrt(2.0) * std::pow(pi, -0.25) * 0.7 * std::exp(-0.245)).epsilon(1e-14));
}

TEST_CASE("snapshot round trip and corruption") {
    const auto dir = std::filesystem::temp_directory_path() / "tpg_snapshot_test";
    std::filesystem::create_directories(dir);
    const auto l   = ModeLayout::uniform("ABC", 3);
    const auto psi = StateVector::from_dense(l, VectorXc::Random(27)).normalized();
    for(auto enc : {SnapshotEncoding::Dense, SnapshotEncoding::Sparse, SnapshotEncoding::Auto}) {
        const auto path = dir / "state.tpgs";
        write_snapshot(path, psi, {{"xi", 0.3}}, enc);
        const auto back = read_snapshot(path);
        CHECK(back.layout() == l);
        CHECK(std::abs(back.inner(psi) - 1.0) < 1e-14);
        CHECK(read_snapshot_manifest(path)["parameters"]["xi"] == 0.3);
    }
    {
        std::ifstream in(dir / "state.tpgs", std::ios::binary);
        std::string   head(4, '\0');
        in.read(head.data(), 4);
        CHECK(head == "TPGS");
    }
    {
        std::fstream f(dir / "state.tpgs", std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(20);
        f.put('\x7f');
    }
    CHECK_THROWS_AS(read_snapshot(dir / "state.tpgs"), CorruptDataError);
    std::filesystem::remove_all(dir);
}

#include "qstatfn/geo.hpp"

#include "qstatfn/statfuncs.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>

using namespace qstatfn;
using namespace qtest;

namespace {

PositiveOperator random_positive(Index dim, std::mt19937_64& rng) {
    const Matrix g = random_matrix(dim, rng);
    return PositiveOperator(Matrix(g * g.adjoint() + 0.1 * identity(dim)));
}

} // namespace

TEST_CASE("geometric mean basics") {
    std::mt19937_64 rng(137);
    const PositiveOperator a = random_positive(3, rng);
    CHECK(max_abs(geometric_mean(a, a) - a.matrix()) < 1e-10);

    Matrix d1(2, 2), d2(2, 2);
    d1 << 1, 0, 0, 4;
    d2 << 4, 0, 0, 1;
    const PositiveOperator pa(d1), pb(d2);
    const Matrix mid = geometric_mean(pa, pb);
    CHECK(mid(0, 0).real() == doctest::Approx(2.0));
    CHECK(mid(1, 1).real() == doctest::Approx(2.0));

    const PositiveOperator b = random_positive(3, rng);
    CHECK(max_abs(geometric_mean(a, b, 0.0) - a.matrix()) < 1e-10);
    CHECK(max_abs(geometric_mean(a, b, 1.0) - b.matrix()) < 1e-10);

    Matrix singular(2, 2);
    singular << 1, 0, 0, 0;
    CHECK_THROWS_AS(PositiveOperator{singular}, NotPositiveDefinite);
}

TEST_CASE("geodesic midpoint is symmetric") {
    std::mt19937_64 rng(139);
    for (int trial = 0; trial < 5; ++trial) {
        const PositiveOperator a = random_positive(3, rng);
        const PositiveOperator b = random_positive(3, rng);
        CHECK(max_abs(geometric_mean(a, b) - geometric_mean(b, a)) < 1e-10);
    }
}

TEST_CASE("variational block-matrix characterization") {
    std::mt19937_64 rng(149);
    for (int trial = 0; trial < 5; ++trial) {
        const PositiveOperator a = random_positive(3, rng);
        const PositiveOperator b = random_positive(3, rng);
        const Matrix g = geometric_mean(a, b);
        Matrix block(6, 6);
        block.topLeftCorner(3, 3) = a.matrix();
        block.topRightCorner(3, 3) = g;
        block.bottomLeftCorner(3, 3) = g;
        block.bottomRightCorner(3, 3) = b.matrix();
        Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("trace of the geometric mean bounds the fidelity") {
    std::mt19937_64 rng(151);
    const DensityOperator rho = make_density(random_density(2, rng));
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
    const GeoTraceBound self_bound = geo_mean_trace_bound(rho, rho);
    CHECK(self_bound.tr_geo == doctest::Approx(1.0).epsilon(1e-10));

    Matrix c1(2, 2), c2(2, 2);
    c1 << 0.7, 0, 0, 0.3;
    c2 << 0.4, 0, 0, 0.6;
    const GeoTraceBound classical = geo_mean_trace_bound(make_density(c1), make_density(c2));
    const double bhatta = std::sqrt(0.28) + std::sqrt(0.18);
    CHECK(classical.tr_geo == doctest::Approx(bhatta).epsilon(1e-10));
    CHECK(classical.fid == doctest::Approx(bhatta).epsilon(1e-10));

    for (int trial = 0; trial < 5; ++trial) {
        const GeoTraceBound bound = geo_mean_trace_bound(
            make_density(random_density(2, rng)), make_density(random_density(2, rng)));
        CHECK(bound.tr_geo <= bound.fid + 1e-10);
        CHECK(bound.fid - bound.tr_geo > 1e-6); // generic pairs do not commute
    }
}

TEST_CASE("geometric-mean generating function") {
    const DensityOperator mixed = make_density(identity(2) / 2.0);
    const HermitianOperator v(sigma_z());
    // rho # 1 = sqrt(rho).
    CHECK(geo_mgf(mixed, v, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    Matrix d(2, 2);
    d << 0.64, 0, 0, 0.36;
    const DensityOperator diag = make_density(d);
    Matrix vd(2, 2);
    vd << 1, 0, 0, -1;
    const GeoDerivatives derivs = geo_mgf_derivatives(diag, HermitianOperator(vd));
    CHECK(derivs.first == doctest::Approx(0.1).epsilon(1e-12));
    // Commuting second derivative reduces to Tr(sqrt(rho) V^2)/4.
    CHECK(derivs.second == doctest::Approx(0.35).epsilon(1e-12));

    // Commuting closed form rho # e^{theta V} = sqrt(rho) e^{theta V / 2}.
    const double theta = 0.37;
    const double closed = 0.8 * std::exp(theta / 2.0) + 0.6 * std::exp(-theta / 2.0);
    CHECK(geo_mgf(diag, HermitianOperator(vd), theta) ==
          doctest::Approx(closed).epsilon(1e-10));

    Matrix rank_deficient(2, 2);
    rank_deficient << 1, 0, 0, 0;
    CHECK_THROWS_AS(geo_mgf(make_density(rank_deficient), v, 0.1), NotPositiveDefinite);
}

TEST_CASE("geometric-mean derivatives match finite differences") {
    std::mt19937_64 rng(157);
    for (int trial = 0; trial < 5; ++trial) {
        const DensityOperator rho = make_density(random_density(3, rng));
        const HermitianOperator v(random_hermitian(3, rng));
        const GeoDerivatives closed = geo_mgf_derivatives(rho, v);
        const std::function<double(double)> f = [&](double t) { return geo_mgf(rho, v, t); };
        CHECK(std::abs(finite_difference<double>(f, 1, 0.0, 1e-4) - closed.first) < 1e-5);
        CHECK(std::abs(finite_difference<double>(f, 2, 0.0, 1e-4) - closed.second) < 1e-5);
    }
}

TEST_CASE("golden-thompson gap") {
    Matrix c1(2, 2), c2(2, 2);
    c1 << 0.4, 0, 0, -0.9;
    c2 << 1.1, 0, 0, 0.2;
    const GoldenThompson commuting =
        golden_thompson_gap(HermitianOperator(c1), HermitianOperator(c2));
    CHECK(commuting.lhs == doctest::Approx(commuting.rhs).epsilon(1e-12));

    const GoldenThompson pauli =
        golden_thompson_gap(HermitianOperator(sigma_x()), HermitianOperator(sigma_z()));
    CHECK(pauli.lhs == doctest::Approx(2.0 * std::cosh(std::sqrt(2.0))).epsilon(1e-12));
    const Matrix direct = pauli_exp(1.0, sigma_x()) * pauli_exp(1.0, sigma_z());
    CHECK(pauli.rhs == doctest::Approx(direct.trace().real()).epsilon(1e-12));
    CHECK(pauli.lhs < pauli.rhs);

    const GoldenThompson zero = golden_thompson_gap(HermitianOperator(Matrix::Zero(3, 3)),
                                                    HermitianOperator(Matrix::Zero(3, 3)));
    CHECK(zero.lhs == doctest::Approx(3.0));
    CHECK(zero.rhs == doctest::Approx(3.0));
}

TEST_CASE("chernoff functional and relative entropy") {
    std::mt19937_64 rng(163);
    const DensityOperator rho = make_density(random_density(3, rng));
    for (int i = 0; i <= 10; ++i) {
        CHECK(std::abs(chernoff(rho, rho, 0.1 * i)) < 1e-10);
    }
    CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(relative_entropy_variance(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));

    Matrix half(2, 2), skew(2, 2);
    half << 0.5, 0, 0, 0.5;
    skew << 0.75, 0, 0, 0.25;
    const DensityOperator r = make_density(half);
    const DensityOperator s = make_density(skew);
    CHECK(relative_entropy(r, s) ==
          doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-12));
    CHECK(chernoff(r, s, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(chernoff(r, s, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

    const DensityOperator sigma = make_density(random_density(3, rng));
    CHECK(relative_entropy(rho, sigma) >= 0.0);

    // Convexity over the unit interval.
    std::vector<double> psi;
    for (int i = 0; i <= 10; ++i) psi.push_back(chernoff(rho, sigma, 0.1 * i));
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        CHECK(psi[i + 1] - 2.0 * psi[i] + psi[i - 1] >= -1e-9);
    }

    // Derivatives at zero against central finite differences of psi.
    const std::function<double(double)> f = [&](double t) {
        return chernoff(rho, sigma, t);
    };
    CHECK(std::abs(finite_difference<double>(f, 1, 0.0, kFdStepOrder1) +
                   relative_entropy(rho, sigma)) < 1e-5);
    CHECK(std::abs(finite_difference<double>(f, 2, 0.0, kFdStepOrder2) -
                   relative_entropy_variance(rho, sigma)) < 1e-5);
}

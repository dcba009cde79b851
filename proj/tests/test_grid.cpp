#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "triplets/grid.hpp"

using namespace triplets;
using testing::rel;

TEST_CASE("grid weights and nodes")
{
    const FrequencyGrid g(1.0, 3.0, 5);
    CHECK(g.step() == doctest::Approx(0.5));
    CHECK(g.weight(0) == doctest::Approx(0.25));
    CHECK(g.weight(2) == doctest::Approx(0.5));
    CHECK(g.omega(4) == doctest::Approx(3.0));

    const FrequencyGrid big(1.2e15, 1.3e15, 161);
    double sum = 0.0;
    for (double w : big.weights())
        sum += w;
    CHECK(rel(sum, 1e14) < 1e-12);

    CHECK_THROWS_AS(FrequencyGrid(2.0, 1.0, 5), Error);
    CHECK_THROWS_AS(FrequencyGrid(1.0, 2.0, 1), Error);
    CHECK_THROWS_AS(FrequencyGrid(1.0, 1.0, 5), Error);
}

TEST_CASE("trapezoid rule on a Gaussian")
{
    // 6 points per standard deviation, +-8 sigma
    const double sigma = 2.5e13, c = 1.2e15;
    const FrequencyGrid g(c - 8 * sigma, c + 8 * sigma, 97);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = (g.omega(i) - c) / sigma;
        s += g.weight(i) * std::exp(-x * x);
    }
    CHECK(rel(s, sigma * std::sqrt(std::numbers::pi)) < 1e-6);
}

TEST_CASE("l2_norm3")
{
    const FrequencyGrid g(0.0, 2.0, 9);
    Tensor3C zero(g);
    CHECK(l2_norm3(zero) == 0.0);

    Tensor3C ones(g, std::vector<cplx>(9 * 9 * 9, cplx(1.0, 0.0)));
    CHECK(rel(l2_norm3(ones), std::pow(2.0, 1.5)) < 1e-12);

    // Gaussian product normalized analytically, not by quadrature
    const double s = 1.0, c = 0.0;
    const FrequencyGrid h(c - 8 * s, c + 8 * s, 97);
    Tensor3C gt(h);
    const double a = std::pow(std::numbers::pi * s * s, -0.25);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            for (std::size_t k = 0; k < h.size(); ++k) {
                const double r2 = h.omega(i) * h.omega(i) + h.omega(j) * h.omega(j) + h.omega(k) * h.omega(k);
                gt(i, j, k) = a * a * a * std::exp(-0.5 * r2 / (s * s));
            }
    CHECK(std::abs(l2_norm3(gt) - 1.0) < 1e-6);

    const double before = l2_norm3(gt);
    gt *= cplx(-1.5, 2.0);
    CHECK(rel(l2_norm3(gt), 2.5 * before) < 1e-12);
}

TEST_CASE("hermitian_eig contract")
{
    const auto id = hermitian_eig(Eigen::MatrixXcd::Identity(4, 4));
    for (int i = 0; i < 4; ++i)
        CHECK(id.values(i) == doctest::Approx(1.0));

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const auto es = hermitian_eig(d);
    CHECK(es.values(0) == doctest::Approx(3.0));
    CHECK(es.values(1) == doctest::Approx(2.0));
    CHECK(es.values(2) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(1, 2)) == doctest::Approx(1.0));

    Eigen::VectorXcd v = Eigen::VectorXcd::Random(6);
    v.normalize();
    const auto r1 = hermitian_eig(v * v.adjoint());
    CHECK(r1.values(0) == doctest::Approx(1.0));
    for (int i = 1; i < 6; ++i)
        CHECK(std::abs(r1.values(i)) < 1e-12);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 12;
        Eigen::MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = cplx(nd(rng), nd(rng));
        const Eigen::MatrixXcd m = a + a.adjoint();
        const auto e = hermitian_eig(m);
        const double scale = m.norm();
        for (int i = 0; i + 1 < n; ++i)
            CHECK(e.values(i) >= e.values(i + 1));
        CHECK((m * e.vectors - e.vectors * e.values.asDiagonal()).norm() <= 1e-9 * scale);
        CHECK((e.vectors.adjoint() * e.vectors - Eigen::MatrixXcd::Identity(n, n)).norm() <= 1e-9);
        CHECK(std::abs(e.values.sum() - m.trace().real()) <= 1e-9 * scale);
    }

    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(bad), Error);
    try {
        hermitian_eig(bad);
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NonHermitianInput);
    }
}

TEST_CASE("HermitianMatrix validation")
{
    const FrequencyGrid g(0.0, 1.0, 3);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
    m(0, 2) = cplx(0.0, 1.0);
    m(2, 0) = cplx(0.0, -1.0);
    const HermitianMatrix h(g, m);
    CHECK(h.values()(0, 2) == cplx(0.0, 1.0));
    m(2, 0) = cplx(0.0, 1.0);
    CHECK_THROWS_AS(HermitianMatrix(g, m), Error);
    CHECK_THROWS_AS(HermitianMatrix(g, Eigen::MatrixXcd::Identity(4, 4)), Error);
}

TEST_CASE("interp_linear")
{
    const std::vector<double> xs{0.0, 1.0}, ys{0.0, 2.0};
    CHECK(interp_linear(xs, ys, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(interp_linear(xs, ys, 1.5), Error);
    CHECK_THROWS_AS(interp_linear(xs, ys, -0.1), Error);

    std::vector<double> qx, qy;
    const double h = 0.01;
    for (int i = 0; i <= 200; ++i) {
        qx.push_back(i * h);
        qy.push_back(std::pow(i * h, 2));
    }
    for (std::size_t k = 0; k < qx.size(); k += 37)
        CHECK(interp_linear(qx, qy, qx[k]) == qy[k]);
    // linear interpolation of x^2 errs by at most h^2 / 4
    for (double x = 0.0005; x < 2.0; x += 0.0173)
        CHECK(std::abs(interp_linear(qx, qy, x) - x * x) <= h * h / 4 + 1e-15);
}

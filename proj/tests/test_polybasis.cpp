#include "frlab/error.hpp"
#include "frlab/polybasis.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace frlab;
using Catch::Approx;

TEST_CASE("legendre_eval matches hand values", "[polybasis]")
{
    CHECK(legendre_eval(0, 0.3) == 1.0);
    CHECK(legendre_eval(1, -1.0) == -1.0);
    const double x = 0.5;
    const double by_hand = (35 * x * x * x * x - 30 * x * x + 3) / 8.0;
    CHECK(legendre_eval(4, 0.5) == Approx(by_hand).margin(1e-15));
    CHECK(by_hand == -0.2890625);
}

TEST_CASE("legendre_eval equals one at xi = 1 for all degrees", "[polybasis]")
{
    for (int n = 0; n <= 20; ++n)
    {
        CHECK(legendre_eval(n, 1.0) == Approx(1.0).margin(1e-14));
        CHECK(legendre_eval(n, -1.0) == Approx(n % 2 ? -1.0 : 1.0).margin(1e-14));
    }
}

TEST_CASE("legendre_eval agrees with the explicit power sum", "[polybasis]")
{
    for (int n = 0; n <= 12; ++n)
        for (double x : {-1.0, -0.73, -0.2, 0.0, 0.11, 0.5, 0.94, 1.0})
        {
            CHECK(legendre_eval(n, x) == Approx(oracle::legendre(n, x)).margin(1e-12));
            CHECK(legendre_deriv(n, x) == Approx(oracle::legendre_derivative(n, x)).margin(1e-10));
        }
}

TEST_CASE("legendre_deriv matches hand values", "[polybasis]")
{
    CHECK(legendre_deriv(0, 0.7) == 0.0);
    CHECK(legendre_deriv(1, -0.2) == 1.0);
    CHECK(legendre_deriv(2, 0.5) == Approx(1.5).margin(1e-15));
}

TEST_CASE("Legendre arguments outside [-1, 1] are rejected", "[polybasis]")
{
    CHECK_THROWS_AS(legendre_eval(3, 1.1), DomainError);
    CHECK_THROWS_AS(legendre_deriv(3, -1.0 - 1e-9), DomainError);
    CHECK_NOTHROW(legendre_eval(3, 1.0 + 5e-13));
    CHECK_THROWS_AS(legendre_eval(-1, 0.0), InvalidArgument);
}

TEST_CASE("Gauss-Legendre rules for small n", "[polybasis]")
{
    const NodeSet g1 = gauss_legendre_points(1);
    REQUIRE(g1.size() == 1);
    CHECK(g1.node(0) == 0.0);
    CHECK(g1.weight(0) == Approx(2.0).margin(1e-15));

    const NodeSet g2 = gauss_legendre_points(2);
    CHECK(g2.node(0) == Approx(-1.0 / std::sqrt(3.0)).margin(1e-15));
    CHECK(g2.node(1) == Approx(1.0 / std::sqrt(3.0)).margin(1e-15));
    CHECK(g2.weight(0) == Approx(1.0).margin(1e-14));
    CHECK(g2.weight(1) == Approx(1.0).margin(1e-14));

    const NodeSet g3 = gauss_legendre_points(3);
    CHECK(g3.node(0) == Approx(-std::sqrt(0.6)).margin(1e-15));
    CHECK(g3.node(1) == 0.0);
    CHECK(g3.node(2) == Approx(std::sqrt(0.6)).margin(1e-15));
    CHECK(g3.weight(0) == Approx(5.0 / 9.0).margin(1e-14));
    CHECK(g3.weight(1) == Approx(8.0 / 9.0).margin(1e-14));
    CHECK(g3.weight(2) == Approx(5.0 / 9.0).margin(1e-14));

    CHECK_THROWS_AS(gauss_legendre_points(0), InvalidArgument);
}

TEST_CASE("Gauss-Legendre nodes are increasing roots with weights summing to two", "[polybasis]")
{
    for (int n = 1; n <= 16; ++n)
    {
        const NodeSet g = gauss_legendre_points(n);
        CHECK(g.is_gauss());
        CHECK(g.weight_vector().sum() == Approx(2.0).margin(1e-13));
        for (int i = 0; i < n; ++i)
        {
            CHECK(std::abs(oracle::legendre(n, g.node(i))) < 1e-12);
            CHECK(g.weight(i) > 0.0);
            if (i > 0)
                CHECK(g.node(i) > g.node(i - 1));
        }
    }
}

TEST_CASE("Gauss rules integrate degree 2n-1 exactly", "[polybasis]")
{
    for (int n = 1; n <= 10; ++n)
    {
        const NodeSet g = gauss_legendre_points(n);
        for (int d = 0; d <= 2 * n - 1; ++d)
        {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += g.weight(i) * std::pow(g.node(i), d);
            const double exact = (d % 2) ? 0.0 : 2.0 / (d + 1);
            CHECK(s == Approx(exact).margin(1e-12));
        }
    }
}

TEST_CASE("Gauss quadrature reproduces the modal mass matrix", "[polybasis]")
{
    for (int n = 1; n <= 8; ++n)
    {
        const NodeSet g = gauss_legendre_points(n);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; i + j <= 2 * n - 1; ++j)
            {
                double s = 0.0;
                for (int q = 0; q < n; ++q)
                    s += g.weight(q) * oracle::legendre(i, g.node(q)) * oracle::legendre(j, g.node(q));
                CHECK(s == Approx(i == j ? 2.0 / (2 * j + 1) : 0.0).margin(1e-12));
            }
    }
}

TEST_CASE("Gauss-Lobatto rule includes the endpoints and is exact for degree 2n-3", "[polybasis]")
{
    for (int n = 2; n <= 9; ++n)
    {
        const NodeSet g = gauss_lobatto_points(n);
        CHECK_FALSE(g.is_gauss());
        CHECK(g.node(0) == -1.0);
        CHECK(g.node(n - 1) == 1.0);
        for (int d = 0; d <= 2 * n - 3; ++d)
        {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += g.weight(i) * std::pow(g.node(i), d);
            CHECK(s == Approx((d % 2) ? 0.0 : 2.0 / (d + 1)).margin(1e-12));
        }
    }
}

TEST_CASE("lagrange_eval is cardinal and a partition of unity", "[polybasis]")
{
    for (int n : {1, 2, 4, 7})
    {
        const NodeSet ns = gauss_legendre_points(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                CHECK(lagrange_eval(ns, j, ns.node(i)) == Approx(i == j ? 1.0 : 0.0).margin(1e-14));
        for (double x : {-1.0, -0.4, 0.3, 1.0})
            CHECK(lagrange_row(ns, x).sum() == Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("lagrange_eval on {-1, 0, 1} at 0.5", "[polybasis]")
{
    const NodeSet ns = NodeSet::from_nodes({-1.0, 0.0, 1.0});
    CHECK(lagrange_eval(ns, 1, 0.5) == Approx(0.75).margin(1e-15));
    CHECK_THROWS_AS(lagrange_eval(ns, 3, 0.0), IndexError);
    CHECK_THROWS_AS(lagrange_eval(ns, -1, 0.0), IndexError);
}

TEST_CASE("from_nodes rejects repeated or unordered nodes", "[polybasis]")
{
    CHECK_THROWS_AS(NodeSet::from_nodes({-0.5, -0.5, 0.5}), SingularMatrixError);
    CHECK_THROWS_AS(NodeSet::from_nodes({0.5, -0.5}), SingularMatrixError);
    CHECK_THROWS_AS(NodeSet::from_nodes({-1.5, 0.0}), DomainError);
    CHECK_THROWS_AS(NodeSet::from_nodes({}), InvalidArgument);
}

TEST_CASE("from_nodes builds interpolatory weights", "[polybasis]")
{
    const NodeSet ns = NodeSet::from_nodes({-1.0, 0.0, 1.0});
    CHECK(ns.weight(0) == Approx(1.0 / 3.0).margin(1e-14));
    CHECK(ns.weight(1) == Approx(4.0 / 3.0).margin(1e-14));
    CHECK(ns.weight(2) == Approx(1.0 / 3.0).margin(1e-14));
}

TEST_CASE("build_operators for Gauss p = 1", "[polybasis]")
{
    const NodeSet ns = gauss_legendre_points(2);
    const OperatorSet ops = build_operators(ns);
    const double inv = 1.0 / (ns.node(1) - ns.node(0));
    for (int i = 0; i < 2; ++i)
    {
        CHECK(ops.D(i, 0) == Approx(-inv).margin(1e-14));
        CHECK(ops.D(i, 1) == Approx(inv).margin(1e-14));
    }
}

TEST_CASE("build_operators invariants", "[polybasis]")
{
    for (int n = 1; n <= 9; ++n)
    {
        for (const NodeSet& ns : {gauss_legendre_points(n), n >= 2 ? gauss_lobatto_points(n) : gauss_legendre_points(n)})
        {
            const OperatorSet ops = build_operators(ns);
            CHECK(ops.p == n - 1);
            CHECK((ops.D * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(ops.l_left.sum() == Approx(1.0).margin(1e-13));
            CHECK(ops.l_right.sum() == Approx(1.0).margin(1e-13));
            CHECK((ops.V.col(0) - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() == 0.0);
            CHECK((ops.V * ops.V_inv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
            for (int j = 0; j < n; ++j)
                CHECK(ops.modal_mass(j) == Approx(2.0 / (2 * j + 1)).margin(1e-15));

            // D [x^k] = k [x^(k-1)]
            for (int k = 0; k <= ops.p; ++k)
            {
                Eigen::VectorXd xk(n), dxk(n);
                for (int i = 0; i < n; ++i)
                {
                    xk(i) = std::pow(ns.node(i), k);
                    dxk(i) = k == 0 ? 0.0 : k * std::pow(ns.node(i), k - 1);
                }
                CHECK((ops.D * xk - dxk).cwiseAbs().maxCoeff() < 1e-10);
            }

            // Entries against the product-rule derivative of the Lagrange basis.
            std::vector<double> nodes(ns.nodes().begin(), ns.nodes().end());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK(ops.D(i, j) == Approx(oracle::lagrange_derivative(nodes, j, ns.node(i))).margin(1e-10));
        }
    }
}

TEST_CASE("modal derivative maps psi_n to its Legendre derivative expansion", "[polybasis]")
{
    const OperatorSet ops = build_operators(gauss_legendre_points(6));
    const Eigen::MatrixXd Dm = ops.modal_derivative();
    // psi_3' = 5 psi_2 + psi_0, psi_4' = 7 psi_3 + 3 psi_1
    CHECK(Dm(2, 3) == Approx(5.0).margin(1e-11));
    CHECK(Dm(0, 3) == Approx(1.0).margin(1e-11));
    CHECK(Dm(1, 3) == Approx(0.0).margin(1e-11));
    CHECK(Dm(3, 4) == Approx(7.0).margin(1e-11));
    CHECK(Dm(1, 4) == Approx(3.0).margin(1e-11));

    for (int p = 0; p <= 8; ++p)
    {
        const OperatorSet o = build_operators(gauss_legendre_points(p + 1));
        CHECK((o.modal_derivative() - o.V_inv * o.D * o.V).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(legendre_derivative_matrix(-1), InvalidArgument);
}

TEST_CASE("D differentiates random polynomials exactly", "[polybasis][property]")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(1, 8);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int p = pick(rng);
        const NodeSet ns = gauss_legendre_points(p + 1);
        const OperatorSet ops = build_operators(ns);
        Eigen::VectorXd c(p + 1);
        for (int i = 0; i <= p; ++i)
            c(i) = u(rng);
        Eigen::VectorXd f(p + 1), df(p + 1);
        for (int i = 0; i <= p; ++i)
        {
            f(i) = oracle::series(c, ns.node(i));
            df(i) = oracle::series_derivative(c, ns.node(i));
        }
        CHECK((ops.D * f - df).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("legendre_udu table values", "[polybasis]")
{
    CHECK(legendre_udu(0, 1) == 2.0);
    CHECK(legendre_udu(1, 0) == 0.0);
    CHECK(legendre_udu(2, 2) == 0.0);
}

TEST_CASE("legendre_udu agrees with quadrature of psi_l psi_m'", "[polybasis][property]")
{
    const NodeSet g = gauss_legendre_points(12);
    for (int l = 0; l <= 10; ++l)
        for (int m = 0; m <= 10; ++m)
        {
            double s = 0.0;
            for (int q = 0; q < g.size(); ++q)
                s += g.weight(q) * oracle::legendre(l, g.node(q)) * oracle::legendre_derivative(m, g.node(q));
            CHECK(legendre_udu(l, m) == Approx(s).margin(1e-10));
        }
}

TEST_CASE("interpolation matrix reproduces polynomials", "[polybasis]")
{
    const NodeSet from = gauss_legendre_points(5);
    const NodeSet to = gauss_lobatto_points(7);
    const Eigen::MatrixXd I = interpolation_matrix(from, to);
    Eigen::VectorXd f(5), g(7);
    for (int i = 0; i < 5; ++i)
        f(i) = 1.0 - 2.0 * from.node(i) + std::pow(from.node(i), 4);
    for (int i = 0; i < 7; ++i)
        g(i) = 1.0 - 2.0 * to.node(i) + std::pow(to.node(i), 4);
    CHECK((I * f - g).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("legendre_series and its derivative", "[polybasis]")
{
    Eigen::VectorXd c(4);
    c << 0.3, -1.2, 0.5, 2.0;
    for (double x : {-1.0, -0.2, 0.6, 1.0})
    {
        CHECK(legendre_series(c, x) == Approx(oracle::series(c, x)).margin(1e-13));
        CHECK(legendre_series_deriv(c, x) == Approx(oracle::series_derivative(c, x)).margin(1e-12));
    }
    CHECK(legendre_values(3, 0.4).size() == 4);
}

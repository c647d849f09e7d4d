#include "frlab/polybasis.hpp"

#include "frlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace frlab
{
    namespace
    {
        constexpr double domain_slack = 1e-12;
        constexpr double newton_tol = 1e-14;
        constexpr int newton_max_iter = 100;

        void check_domain(double xi)
        {
            if (!(std::abs(xi) <= 1.0 + domain_slack))
                throw DomainError("xi = " + std::to_string(xi) + " lies outside [-1, 1]");
        }

        void check_degree(int n)
        {
            if (n < 0)
                throw InvalidArgument("Legendre degree must be non-negative, got " + std::to_string(n));
        }

        // psi_n and psi_n' together; the derivative recurrence
        // psi'_{m+1} = psi'_{m-1} + (2m + 1) psi_m is valid at the endpoints too.
        std::pair<double, double> legendre_pair(int n, double xi)
        {
            if (n == 0)
                return {1.0, 0.0};
            double p_prev = 1.0, p_cur = xi;
            double d_prev = 0.0, d_cur = 1.0;
            for (int m = 1; m < n; ++m)
            {
                const double p_next = ((2 * m + 1) * xi * p_cur - m * p_prev) / (m + 1);
                const double d_next = d_prev + (2 * m + 1) * p_cur;
                p_prev = p_cur;
                p_cur = p_next;
                d_prev = d_cur;
                d_cur = d_next;
            }
            return {p_cur, d_cur};
        }

        std::vector<double> barycentric_weights(std::span<const double> x)
        {
            const std::size_t n = x.size();
            std::vector<double> w(n, 1.0);
            for (std::size_t j = 0; j < n; ++j)
            {
                for (std::size_t k = 0; k < n; ++k)
                    if (k != j)
                        w[j] *= (x[j] - x[k]);
                w[j] = 1.0 / w[j];
            }
            return w;
        }
    } // namespace

    double legendre_eval(int n, double xi)
    {
        check_degree(n);
        check_domain(xi);
        return legendre_pair(n, xi).first;
    }

    double legendre_deriv(int n, double xi)
    {
        check_degree(n);
        check_domain(xi);
        return legendre_pair(n, xi).second;
    }

    Eigen::VectorXd legendre_values(int n, double xi)
    {
        check_degree(n);
        check_domain(xi);
        Eigen::VectorXd v(n + 1);
        v(0) = 1.0;
        if (n >= 1)
            v(1) = xi;
        for (int m = 1; m < n; ++m)
            v(m + 1) = ((2 * m + 1) * xi * v(m) - m * v(m - 1)) / (m + 1);
        return v;
    }

    double legendre_series(const Eigen::VectorXd& coeffs, double xi)
    {
        if (coeffs.size() == 0)
            return 0.0;
        return coeffs.dot(legendre_values(static_cast<int>(coeffs.size()) - 1, xi));
    }

    double legendre_series_deriv(const Eigen::VectorXd& coeffs, double xi)
    {
        check_domain(xi);
        double sum = 0.0;
        for (Eigen::Index i = 1; i < coeffs.size(); ++i)
            sum += coeffs(i) * legendre_pair(static_cast<int>(i), xi).second;
        return sum;
    }

    Eigen::MatrixXd legendre_derivative_matrix(int n)
    {
        if (n < 0)
            throw InvalidArgument("order must be non-negative");
        Eigen::MatrixXd Dm = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (int j = 1; j <= n; ++j)
            for (int i = j - 1; i >= 0; i -= 2)
                Dm(i, j) = 2.0 * i + 1.0;
        return Dm;
    }

    double legendre_udu(int l, int m)
    {
        check_degree(l);
        check_degree(m);
        return ((l % 2) != (m % 2) && l <= m) ? 2.0 : 0.0;
    }

    NodeSet::NodeSet(std::vector<double> nodes, std::vector<double> weights, bool gauss)
        : nodes_(std::move(nodes)), weights_(std::move(weights)), gauss_(gauss)
    {
    }

    NodeSet NodeSet::from_nodes(std::vector<double> nodes)
    {
        if (nodes.empty())
            throw InvalidArgument("a node set needs at least one node");
        for (std::size_t i = 0; i < nodes.size(); ++i)
        {
            check_domain(nodes[i]);
            if (i > 0 && !(nodes[i] > nodes[i - 1]))
                throw SingularMatrixError("nodes must be distinct and strictly increasing");
        }
        // Interpolatory weights w_j = int l_j, computed with a Gauss rule exact for degree p.
        const NodeSet gauss = gauss_legendre_points(static_cast<int>(nodes.size()));
        NodeSet tmp(nodes, std::vector<double>(nodes.size(), 0.0), false);
        std::vector<double> weights(nodes.size(), 0.0);
        for (int q = 0; q < gauss.size(); ++q)
        {
            const Eigen::VectorXd row = lagrange_row(tmp, gauss.node(q));
            for (std::size_t j = 0; j < nodes.size(); ++j)
                weights[j] += gauss.weight(q) * row(static_cast<Eigen::Index>(j));
        }
        return NodeSet(std::move(nodes), std::move(weights), false);
    }

    NodeSet gauss_legendre_points(int n)
    {
        if (n < 1)
            throw InvalidArgument("Gauss-Legendre rule needs n >= 1, got " + std::to_string(n));
        std::vector<double> x(static_cast<std::size_t>(n));
        std::vector<double> w(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
        {
            // Chebyshev-type initial guess, descending in i.
            double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < newton_max_iter; ++it)
            {
                const auto [pn, dpn] = legendre_pair(n, xi);
                const double dx = pn / dpn;
                xi -= dx;
                if (std::abs(dx) < newton_tol)
                    break;
            }
            const double dpn = legendre_pair(n, xi).second;
            x[static_cast<std::size_t>(n - 1 - i)] = xi;
            w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - xi * xi) * dpn * dpn);
        }
        // Enforce exact antisymmetry of the rule.
        for (int i = 0; i < n / 2; ++i)
        {
            const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
            const double a = 0.5 * (x[hi] - x[lo]);
            x[lo] = -a;
            x[hi] = a;
            const double wa = 0.5 * (w[lo] + w[hi]);
            w[lo] = w[hi] = wa;
        }
        if (n % 2 == 1)
            x[static_cast<std::size_t>(n / 2)] = 0.0;
        return NodeSet(std::move(x), std::move(w), true);
    }

    NodeSet gauss_lobatto_points(int n)
    {
        if (n < 2)
            throw InvalidArgument("Gauss-Lobatto rule needs n >= 2, got " + std::to_string(n));
        const int m = n - 1;
        std::vector<double> x(static_cast<std::size_t>(n));
        std::vector<double> w(static_cast<std::size_t>(n));
        x.front() = -1.0;
        x.back() = 1.0;
        for (int i = 1; i < m; ++i)
        {
            double xi = -std::cos(std::numbers::pi * i / m);
            for (int it = 0; it < newton_max_iter; ++it)
            {
                const auto [pm, dpm] = legendre_pair(m, xi);
                const double d2pm = (2.0 * xi * dpm - m * (m + 1) * pm) / (1.0 - xi * xi);
                const double dx = dpm / d2pm;
                xi -= dx;
                if (std::abs(dx) < newton_tol)
                    break;
            }
            x[static_cast<std::size_t>(i)] = xi;
        }
        for (int i = 0; i < n; ++i)
        {
            const double pm = legendre_pair(m, x[static_cast<std::size_t>(i)]).first;
            w[static_cast<std::size_t>(i)] = 2.0 / (m * (m + 1) * pm * pm);
        }
        return NodeSet(std::move(x), std::move(w), false);
    }

    double lagrange_eval(const NodeSet& ns, int j, double xi)
    {
        if (j < 0 || j >= ns.size())
            throw IndexError("Lagrange index " + std::to_string(j) + " outside [0, " +
                             std::to_string(ns.order()) + "]");
        const auto x = ns.nodes();
        double value = 1.0;
        for (int i = 0; i < ns.size(); ++i)
            if (i != j)
                value *= (xi - x[static_cast<std::size_t>(i)]) /
                         (x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(i)]);
        return value;
    }

    Eigen::VectorXd lagrange_row(const NodeSet& ns, double xi)
    {
        Eigen::VectorXd row(ns.size());
        for (int j = 0; j < ns.size(); ++j)
            row(j) = lagrange_eval(ns, j, xi);
        return row;
    }

    OperatorSet build_operators(const NodeSet& ns)
    {
        const int n = ns.size();
        const auto x = ns.nodes();
        for (int i = 1; i < n; ++i)
            if (!(x[static_cast<std::size_t>(i)] > x[static_cast<std::size_t>(i - 1)]))
                throw SingularMatrixError("Vandermonde matrix is singular: nodes are not distinct");

        OperatorSet ops;
        ops.p = ns.order();

        // Barycentric differentiation matrix; diagonal from the zero row-sum identity.
        const std::vector<double> bw = barycentric_weights(x);
        ops.D = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
        {
            double diag = 0.0;
            for (int j = 0; j < n; ++j)
            {
                if (i == j)
                    continue;
                const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
                ops.D(i, j) = (bw[sj] / bw[si]) / (x[si] - x[sj]);
                diag -= ops.D(i, j);
            }
            ops.D(i, i) = diag;
        }

        ops.V.resize(n, n);
        for (int i = 0; i < n; ++i)
            ops.V.row(i) = legendre_values(ops.p, x[static_cast<std::size_t>(i)]).transpose();

        Eigen::FullPivLU<Eigen::MatrixXd> lu(ops.V);
        if (!lu.isInvertible())
            throw SingularMatrixError("Vandermonde matrix is singular");
        ops.V_inv = lu.inverse();

        ops.modal_mass.resize(n);
        for (int j = 0; j < n; ++j)
            ops.modal_mass(j) = 2.0 / (2.0 * j + 1.0);

        ops.l_left = lagrange_row(ns, -1.0);
        ops.l_right = lagrange_row(ns, 1.0);
        return ops;
    }

    Eigen::MatrixXd interpolation_matrix(const NodeSet& from, const NodeSet& to)
    {
        Eigen::MatrixXd I(to.size(), from.size());
        for (int i = 0; i < to.size(); ++i)
            I.row(i) = lagrange_row(from, to.node(i)).transpose();
        return I;
    }
} // namespace frlab

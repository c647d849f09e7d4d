#ifndef FRLAB_POLYBASIS_HPP
#define FRLAB_POLYBASIS_HPP

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace frlab
{
    // Legendre polynomials of the first kind on [-1, 1], evaluated by the
    // three-term recurrence. Arguments outside [-1, 1] (beyond 1e-12 slack)
    // raise DomainError.
    double legendre_eval(int n, double xi);
    double legendre_deriv(int n, double xi);

    /// Values psi_0(xi) ... psi_n(xi).
    Eigen::VectorXd legendre_values(int n, double xi);

    /// Synthesis sum_i coeffs[i] * psi_i(xi) and its derivative.
    double legendre_series(const Eigen::VectorXd& coeffs, double xi);
    double legendre_series_deriv(const Eigen::VectorXd& coeffs, double xi);

    /// int_{-1}^{1} psi_l dpsi_m/dxi dxi: 2 when l < m with opposite parity, else 0.
    double legendre_udu(int l, int m);

    /// Exact modal differentiation matrix of order n: column j holds the Legendre
    /// coefficients of psi_j', i.e. entry (i, j) = 2i + 1 for i < j with j - i odd.
    Eigen::MatrixXd legendre_derivative_matrix(int n);

    /// Solution / quadrature points on the reference element.
    ///
    /// Nodes are strictly increasing inside [-1, 1]. Weights are the Gauss
    /// weights for Gauss rules and the interpolatory weights int l_j otherwise,
    /// so every node set doubles as a quadrature rule exact for degree p.
    class NodeSet
    {
    public:
        /// Interpolatory node set from arbitrary distinct nodes.
        static NodeSet from_nodes(std::vector<double> nodes);

        int order() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
        int size() const noexcept { return static_cast<int>(nodes_.size()); }
        std::span<const double> nodes() const noexcept { return nodes_; }
        std::span<const double> weights() const noexcept { return weights_; }
        double node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
        double weight(int i) const { return weights_.at(static_cast<std::size_t>(i)); }
        bool is_gauss() const noexcept { return gauss_; }

        Eigen::Map<const Eigen::VectorXd> node_vector() const
        {
            return {nodes_.data(), static_cast<Eigen::Index>(nodes_.size())};
        }
        Eigen::Map<const Eigen::VectorXd> weight_vector() const
        {
            return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
        }

    private:
        NodeSet(std::vector<double> nodes, std::vector<double> weights, bool gauss);

        friend NodeSet gauss_legendre_points(int n);
        friend NodeSet gauss_lobatto_points(int n);

        std::vector<double> nodes_;
        std::vector<double> weights_;
        bool gauss_ = false;
    };

    /// n-point Gauss-Legendre rule (order p = n - 1), exact for degree 2n - 1.
    NodeSet gauss_legendre_points(int n);

    /// n-point Gauss-Lobatto rule, n >= 2, exact for degree 2n - 3.
    NodeSet gauss_lobatto_points(int n);

    /// Lagrange basis polynomial l_j of the node set, evaluated at xi.
    double lagrange_eval(const NodeSet& ns, int j, double xi);

    /// Row vector [l_0(xi) ... l_p(xi)].
    Eigen::VectorXd lagrange_row(const NodeSet& ns, double xi);

    /// Element-local operators on the reference element [-1, 1].
    struct OperatorSet
    {
        int p = 0;
        Eigen::MatrixXd D;          ///< D(i, j) = l_j'(xi_i)
        Eigen::MatrixXd V;          ///< V(i, j) = psi_j(xi_i)
        Eigen::MatrixXd V_inv;
        Eigen::VectorXd modal_mass; ///< diagonal of the Legendre mass matrix, 2 / (2j + 1)
        Eigen::VectorXd l_left;     ///< interpolation weights to xi = -1
        Eigen::VectorXd l_right;    ///< interpolation weights to xi = +1

        Eigen::MatrixXd mass_matrix() const { return modal_mass.asDiagonal(); }

        /// Modal differentiation matrix (equal to V^-1 D V, built exactly).
        Eigen::MatrixXd modal_derivative() const { return legendre_derivative_matrix(p); }
    };

    OperatorSet build_operators(const NodeSet& ns);

    /// Interpolation matrix from the nodes of `from` to the nodes of `to`.
    Eigen::MatrixXd interpolation_matrix(const NodeSet& from, const NodeSet& to);
} // namespace frlab

#endif

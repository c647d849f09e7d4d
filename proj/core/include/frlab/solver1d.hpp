#ifndef FRLAB_SOLVER1D_HPP
#define FRLAB_SOLVER1D_HPP

#include "frlab/corrections.hpp"
#include "frlab/polybasis.hpp"
#include "frlab/vonneumann.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace frlab
{
    /// Uniform periodic mesh of n_elem elements on [x_left, x_right].
    struct Mesh1D
    {
        int n_elem = 2;
        double x_left = 0.0;
        double x_right = 1.0;

        double length() const noexcept { return x_right - x_left; }
        double h() const noexcept { return length() / n_elem; }
        double jacobian() const noexcept { return 0.5 * h(); }

        void validate() const;
    };

    /// Nodal solution, one row per element. cfg.h always equals the mesh width.
    struct SolverState
    {
        Eigen::MatrixXd u;
        double t = 0.0;
        SchemeConfig cfg;
        CorrectionPair cp;
    };

    /// FR discretisation with the per-element operators precomputed.
    class Solver1D
    {
    public:
        Solver1D(const Mesh1D& mesh, SchemeConfig cfg, CorrectionPair cp);

        const Mesh1D& mesh() const noexcept { return mesh_; }
        const SchemeConfig& config() const noexcept { return cfg_; }
        const CorrectionPair& correction() const noexcept { return cp_; }
        const OperatorSet& operators() const noexcept { return ops_; }

        /// Physical coordinate of solution point i in element e.
        double x(int e, int i) const;
        Eigen::MatrixXd coordinates() const;

        SolverState project(const std::function<double(double)>& f) const;
        SolverState make_state(Eigen::MatrixXd u, double t = 0.0) const;

        /// First-derivative FR operator with interface value
        /// u^I = alpha u_R(left element) + (1 - alpha) u_L(right element).
        Eigen::MatrixXd derivative(const Eigen::MatrixXd& u, double alpha) const;

        Eigen::MatrixXd rhs_advection(const Eigen::MatrixXd& u) const;
        /// Advection plus nu times the BR1 second derivative.
        Eigen::MatrixXd rhs_advdiff(const Eigen::MatrixXd& u) const;
        /// rhs_advdiff when nu != 0, otherwise rhs_advection.
        Eigen::MatrixXd rhs(const Eigen::MatrixXd& u) const;

        void rk44_step(SolverState& s, double tau) const;

        double energy(const Eigen::MatrixXd& u) const;
        double total_mass(const Eigen::MatrixXd& u) const;

        /// Broken L2 error against exact(x, t), measured with a Gauss rule of p + 4 points.
        double l2_error(const SolverState& s, const std::function<double(double, double)>& exact) const;

    private:
        void check_shape(const Eigen::MatrixXd& u) const;
        /// Element values at the quadrature rule used for energy and mass.
        Eigen::MatrixXd at_quadrature(const Eigen::MatrixXd& u) const;

        Mesh1D mesh_;
        SchemeConfig cfg_;
        CorrectionPair cp_;
        OperatorSet ops_;
        CorrectionGradients g_;
        NodeSet quad_;
        Eigen::MatrixXd to_quad_;
        double alpha_upwind_;
    };

    SolverState project_initial(const Mesh1D& mesh, const SchemeConfig& cfg, const CorrectionPair& cp,
                                const std::function<double(double)>& f);

    Eigen::MatrixXd rhs_advection(const SolverState& s);
    Eigen::MatrixXd rhs_advdiff(const SolverState& s);
    SolverState rk44_step(const SolverState& s, double tau);
    double energy(const SolverState& s);
    double total_mass(const SolverState& s);

    /// Time derivative of half the broken L2 energy, two ways.
    struct EnergyRate
    {
        /// sum_e J int u du/dt, by quadrature of the instantaneous residual.
        double quadrature = 0.0;
        /// sum_e c [ (2u^I_L - u_L) u_L / 2 - (2u^I_R - u_R) u_R / 2 ].
        double boundary_transfer = 0.0;
        /// sum_e c [ (u^I_L - u_L) I_L + (u^I_R - u_R) I_R ], zero for Lebesgue-stable pairs.
        double correction_terms = 0.0;
        std::vector<double> element_quadrature;
        std::vector<double> element_boundary_transfer;
        std::vector<double> element_correction_terms;
    };

    /// Linear advection only (nu must be 0).
    EnergyRate energy_rate(const SolverState& s);

    struct ConvergenceOptions
    {
        double final_time = 1.0;
        /// Fraction of the CFL limit used on the coarsest mesh.
        double cfl_fraction = 0.5;
        /// Time steps shrink like h^max(1, (p + 1) / 4) so temporal error does not mask the spatial order.
        bool refine_time_step = true;
        double x_left = 0.0;
        double x_right = 1.0;
    };

    struct ConvergenceResult
    {
        std::vector<int> n_elem;
        std::vector<double> h;
        std::vector<double> tau;
        std::vector<double> errors;
        /// Least-squares slope of log(error) against log(h).
        double order = 0.0;
    };

    /// Advected sine sin(2 pi (x - c t) / L), damped by exp(-nu (2 pi / L)^2 t) when nu > 0.
    double advected_sine(double x, double t, double c, double nu, double length = 1.0);

    ConvergenceResult convergence_study(const SchemeConfig& cfg, const CorrectionPair& cp,
                                        const std::vector<int>& meshes, const ConvergenceOptions& opts = {});

    /// Least-squares slope of log(y) against log(x).
    double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);
} // namespace frlab

#endif

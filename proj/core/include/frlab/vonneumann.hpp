#ifndef FRLAB_VONNEUMANN_HPP
#define FRLAB_VONNEUMANN_HPP

#include "frlab/corrections.hpp"
#include "frlab/polybasis.hpp"

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <vector>

namespace frlab
{
    using cplx = std::complex<double>;

    /// Scheme parameters for a uniform periodic grid of width-h elements.
    ///
    /// alpha_a is the advection upwinding ratio (1 = upwind, 0.5 = central);
    /// diffusion always uses BR1 (alpha_d = 0.5). The default width h = 1 makes
    /// the physical symbols coincide with 2c Q_a + 4 nu Q_d of the reference-element ones.
    struct SchemeConfig
    {
        NodeSet ns;
        double alpha_a = 1.0;
        double alpha_d = 0.5;
        double c = 1.0;
        double nu = 0.0;
        double h = 1.0;

        int p() const noexcept { return ns.order(); }
        double jacobian() const noexcept { return 0.5 * h; }
        /// Solution-point Nyquist wavenumber pi (p + 1) / h.
        double k_nyquist() const noexcept { return std::numbers::pi * (p() + 1) / h; }
        double k_hat(double k) const noexcept { return k * h / (p() + 1); }
        double k_from_hat(double k_hat) const noexcept { return k_hat * (p() + 1) / h; }

        void validate() const;
    };

    /// Gauss-point scheme of order p with otherwise default parameters.
    SchemeConfig scheme_for_order(int p);

    /// Neighbour-coupling matrices of the first-derivative FR operator:
    /// du_j/dt = -J^-1 (C_plus u_{j+1} + C_zero u_j + C_minus u_{j-1}).
    struct AdvectionOps
    {
        double alpha = 1.0;
        Eigen::MatrixXd C_minus;
        Eigen::MatrixXd C_zero;
        Eigen::MatrixXd C_plus;
    };

    AdvectionOps assemble_interface_ops(const NodeSet& ns, const CorrectionPair& cp, double alpha);

    /// Advection operators with alpha_a, mirrored to 1 - alpha_a when c < 0.
    AdvectionOps assemble_advection(const SchemeConfig& cfg, const CorrectionPair& cp);

    /// BR1 operators (alpha_d) used for both passes of the diffusion discretisation.
    AdvectionOps assemble_diffusion(const SchemeConfig& cfg, const CorrectionPair& cp);

    /// Two-neighbour blocks of the composed second-derivative operator on the
    /// reference element (J = 1): B_{-2} = C_-^2, ..., B_{+2} = C_+^2.
    struct DiffusionBlocks
    {
        Eigen::MatrixXd B_m2, B_m1, B_0, B_p1, B_p2;
    };

    DiffusionBlocks diffusion_blocks(const AdvectionOps& ops);

    /// Reference-element first-derivative symbol C_+ e^{i theta} + C_0 + C_- e^{-i theta}.
    Eigen::MatrixXcd derivative_symbol(const AdvectionOps& ops, double theta);

    /// Q_a = -J^-1 (C_+ e^{ikh} + C_0 + C_- e^{-ikh}); k in (0, k_nq].
    Eigen::MatrixXcd advection_symbol(const AdvectionOps& ops, const SchemeConfig& cfg, double k);

    /// Q_d = J^-2 (e^{-2ikh} B_{-2} + e^{-ikh} B_{-1} + B_0 + e^{ikh} B_{+1} + e^{2ikh} B_{+2}).
    Eigen::MatrixXcd diffusion_symbol(const AdvectionOps& ops, const SchemeConfig& cfg, double k);

    /// Q_ad = 2c Q_a + 4 nu Q_d, for reference-element (h = 2) symbols at a common phase.
    Eigen::MatrixXcd advdiff_symbol(const SchemeConfig& cfg, const Eigen::MatrixXcd& Qa, const Eigen::MatrixXcd& Qd);

    /// Physical-width operator c Q_a + nu Q_d of the full advection-diffusion semi-discretisation.
    Eigen::MatrixXcd physical_operator(const SchemeConfig& cfg, const CorrectionPair& cp, double k);

    enum class StabilityOrder : int
    {
        rk3 = 3,
        rk4 = 4,
    };

    StabilityOrder stability_order(int order);

    struct UpdateMatrix
    {
        Eigen::MatrixXcd R;
        double tau = 0.0;
        StabilityOrder order = StabilityOrder::rk4;
    };

    /// Truncated exponential sum_{m=0}^{order} (tau Q)^m / m!.
    UpdateMatrix update_matrix(const Eigen::MatrixXcd& Q, double tau, StabilityOrder order = StabilityOrder::rk4);

    /// The same polynomial applied to a scalar.
    cplx stability_polynomial(cplx z, StabilityOrder order);

    struct ModeDecomposition
    {
        Eigen::VectorXcd values;
        Eigen::MatrixXcd vectors; ///< unit columns
    };

    ModeDecomposition decompose(const Eigen::MatrixXcd& Q);

    /// Normalised weighted overlap of every eigenvector with the nodal samples
    /// of e^{i theta xi / 2}, theta = k h.
    Eigen::VectorXd fourier_overlaps(const ModeDecomposition& modes, const NodeSet& ns, double theta);

    /// Index of the eigenvector best aligned with the Fourier mode; throws
    /// AmbiguousModeError when the two best overlaps differ by less than 1e-9.
    int physical_mode(const ModeDecomposition& modes, const NodeSet& ns, double theta);

    struct SpectralSample
    {
        double k = 0.0;
        double k_hat = 0.0;
        Eigen::VectorXcd eigenvalues;
        /// Per-mode normalised values: modified wavenumber k_hat* for advection
        /// (Re = dispersion, Im = dissipation), k_hat^2 c_d for diffusion
        /// (Re = dissipation, Im = dispersion), k_hat c(k; tau) for fully discrete.
        Eigen::VectorXcd mode_values;
        int physical_index = 0;
        double dispersion = 0.0;
        double dissipation = 0.0;
        /// Fully discrete only: the modified phase velocity c(k; tau) of the physical mode.
        cplx phase_velocity{0.0, 0.0};
    };

    SpectralSample semi_discrete_dispersion(const SchemeConfig& cfg, const CorrectionPair& cp, double k);
    SpectralSample diffusion_dispersion(const SchemeConfig& cfg, const CorrectionPair& cp, double k);
    SpectralSample fully_discrete_dispersion(const SchemeConfig& cfg, const CorrectionPair& cp, double tau, double k,
                                             StabilityOrder order = StabilityOrder::rk4);

    enum class SweepKind
    {
        semi_advection,
        semi_diffusion,
        fully_discrete,
    };

    struct SweepOptions
    {
        SweepKind kind = SweepKind::semi_advection;
        int n_k = 256;
        double tau = 0.1;
        StabilityOrder order = StabilityOrder::rk4;
    };

    /// Samples k_hat = pi m / n_k, m = 1..n_k. The physical mode is picked by
    /// projection at the first sample and then followed by eigenvector overlap;
    /// the fully discrete logarithm is unwrapped along the sweep.
    std::vector<SpectralSample> dispersion_sweep(const SchemeConfig& cfg, const CorrectionPair& cp,
                                                 const SweepOptions& opts);

    struct CflSearch
    {
        double initial_hi = 4.0;
        double tolerance = 1e-4;
        int scan_points = 64;
        double slack = 1e-10;
        double min_tau_hat = 1e-8;
        double max_hi = 1024.0;
    };

    /// max over the k samples and modes of |R|, at normalised step tau_hat.
    double max_amplification(const SchemeConfig& cfg, const CorrectionPair& cp, double tau_hat,
                             StabilityOrder order, int k_samples);

    /// Largest stable normalised step tau_hat = (2|c|/h + 4 nu/h^2) tau, or 0 when none exists.
    double cfl_limit(const SchemeConfig& cfg, const CorrectionPair& cp, StabilityOrder order = StabilityOrder::rk4,
                     int k_samples = 256, const CflSearch& search = {});

    /// True when the fully discrete scheme is stable for vanishing steps (tau_hat = min_tau_hat).
    bool small_step_stable(const SchemeConfig& cfg, const CorrectionPair& cp, StabilityOrder order = StabilityOrder::rk4,
                           int k_samples = 256, const CflSearch& search = {});

    /// Largest real part of the semi-discrete eigenvalues over k_hat = pi m / k_samples.
    double max_growth_rate(const SchemeConfig& cfg, const CorrectionPair& cp, int k_samples);

    struct CflMapRequest
    {
        double h0_lo = -1.0, h0_hi = 1.0;
        double h1_lo = -1.0, h1_hi = 1.0;
        int n_h0 = 21;
        int n_h1 = 21;
        StabilityOrder order = StabilityOrder::rk4;
        int k_samples = 256;
        int jobs = 1;
        CflSearch search{};
    };

    struct CflMap
    {
        std::vector<double> h0;
        std::vector<double> h1; ///< single entry (unused) for p = 3
        Eigen::MatrixXd tau_hat; ///< rows follow h0, columns follow h1
    };

    /// GLSFR CFL limits over the free parameters (q[0], q[1]) at p = 4 or q[0] at p = 3.
    CflMap cfl_map(const SchemeConfig& cfg, const CflMapRequest& req);

    std::vector<double> linspace(double lo, double hi, int n);
} // namespace frlab

#endif

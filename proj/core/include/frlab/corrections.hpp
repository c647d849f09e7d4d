#ifndef FRLAB_CORRECTIONS_HPP
#define FRLAB_CORRECTIONS_HPP

#include "frlab/polybasis.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frlab
{
    enum class Family
    {
        osfr,
        esfr,
        glsfr,
        custom,
    };

    std::string_view to_string(Family family);
    std::optional<Family> family_from_string(std::string_view name);

    /// Left/right correction functions h_L, h_R of degree p + 1, stored as
    /// Legendre coefficients (length p + 2).
    struct CorrectionPair
    {
        int p = 0;
        Eigen::VectorXd hl;
        Eigen::VectorXd hr;
        Family family = Family::custom;
        /// Set when the family has no free parameters at this order (GLSFR at p = 2).
        bool unique_member = false;

        /// A pair whose right correction is the mirror image h_R(xi) = h_L(-xi).
        static CorrectionPair mirrored(int p, Eigen::VectorXd hl, Family family);
    };

    /// Coefficients (-1)^i c_i, i.e. the Legendre expansion of c(-xi).
    Eigen::VectorXd mirror_coefficients(const Eigen::VectorXd& coeffs);

    /// Nodal DG correction (right Radau polynomial), valid for any p >= 0.
    CorrectionPair nodal_dg(int p);

    struct GlsfrParams
    {
        int p = 2;
        std::vector<double> q; ///< p - 2 free Legendre coefficients h_L[0..p-3]
    };

    /// Lebesgue-stable correction from its free parameters. Coefficients p-2
    /// and p-1 close the even/odd parity sums; p and p+1 enforce the boundary values.
    CorrectionPair glsfr_from_params(const GlsfrParams& params);

    /// OSFR parameter eta_p = iota (2p + 1) (a_p p!)^2 / 2 with a_p = (2p)! / (2^p (p!)^2).
    double osfr_eta(int p, double iota);

    /// Original stable FR corrections (Huynh / Vincent one-parameter family), p >= 1.
    CorrectionPair osfr(int p, double iota);

    struct EsfrK
    {
        int p = 0;
        Eigen::MatrixXd K;
    };

    /// Diagonal ESFR matrix reproducing osfr(p, iota): a single entry K(p, p) = iota (a_p p!)^2.
    EsfrK osfr_equivalent_k(int p, double iota);

    /// Checks K = K^T, K Dm + (K Dm)^T = 0 and M + K > 0 (Dm the modal derivative);
    /// throws ConditionViolation naming the first failed condition.
    void validate_esfr_k(const EsfrK& ek, const OperatorSet& ops);

    /// ESFR correction: g_L = -(M + K)^-1 l, g_R = (M + K)^-1 r, integrated modally.
    CorrectionPair esfr_from_K(const EsfrK& ek, const OperatorSet& ops);

    struct CorrectionValues
    {
        double hl;
        double hr;
    };

    CorrectionValues eval_correction(const CorrectionPair& cp, double xi);

    struct CorrectionGradients
    {
        Eigen::VectorXd g_l;
        Eigen::VectorXd g_r;
    };

    /// dh_L/dxi and dh_R/dxi at the nodes of `ns`.
    CorrectionGradients correction_gradients(const CorrectionPair& cp, const NodeSet& ns);

    /// Exact integral int_{-1}^{1} h(xi) du/dxi dxi for u of degree <= p given by
    /// Legendre coefficients, evaluated by Gauss quadrature of sufficient degree.
    double correction_udu_integral(const Eigen::VectorXd& h_coeffs, const Eigen::VectorXd& u_coeffs);

    struct LebesgueTolerances
    {
        double parity = 1e-12;
        double integral = 1e-10;
        double boundary = 1e-12;
    };

    struct ValidationReport
    {
        double even_sum = 0.0;          ///< sum of hl[i], i even, i < p
        double odd_sum = 0.0;           ///< sum of hl[i], i odd, i < p
        double max_abs_il = 0.0;        ///< max |int h_L u'| over the probe polynomials
        double max_abs_ir = 0.0;
        double hl_left_residual = 0.0;  ///< |h_L(-1) - 1|
        double hl_right_residual = 0.0; ///< |h_L(1)|
        double hr_left_residual = 0.0;  ///< |h_R(-1)|
        double hr_right_residual = 0.0; ///< |h_R(1) - 1|
        bool parity_ok = false;
        bool integrals_ok = false;
        bool boundary_ok = false;
        bool lebesgue_stable = false;

        double max_boundary_residual() const;
    };

    /// Probes I_L, I_R with p + 1 random polynomials of degree <= p drawn from `seed`.
    ValidationReport validate_lebesgue(const CorrectionPair& cp, const LebesgueTolerances& tol = {},
                                       std::uint64_t seed = 0);

    /// Same report with monomials xi^0 ... xi^p as probe polynomials.
    ValidationReport validate_lebesgue_monomials(const CorrectionPair& cp, const LebesgueTolerances& tol = {});

    /// Throws BoundaryClosureError if any boundary value is off by more than `tol`.
    void check_boundary_conditions(const CorrectionPair& cp, double tol = 1e-10);
} // namespace frlab

#endif

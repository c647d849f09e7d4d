#include "frlab/corrections.hpp"

#include "frlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace frlab
{
    namespace
    {
        double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

        double factorial(int n)
        {
            double f = 1.0;
            for (int i = 2; i <= n; ++i)
                f *= i;
            return f;
        }

        // (a_p p!)^2 with a_p = (2p)! / (2^p (p!)^2), i.e. ((2p)! / (2^p p!))^2.
        double ap_factorial_squared(int p)
        {
            const double v = factorial(2 * p) / (std::pow(2.0, p) * factorial(p));
            return v * v;
        }

        // Modal antiderivative of a degree-n Legendre series; the constant term is left at 0.
        Eigen::VectorXd antiderivative(const Eigen::VectorXd& g)
        {
            const Eigen::Index n = g.size();
            Eigen::VectorXd h = Eigen::VectorXd::Zero(n + 1);
            if (n == 0)
                return h;
            h(1) += g(0);
            for (Eigen::Index k = 1; k < n; ++k)
            {
                const double s = g(k) / (2.0 * static_cast<double>(k) + 1.0);
                h(k + 1) += s;
                h(k - 1) -= s;
            }
            return h;
        }

        double value_at_minus_one(const Eigen::VectorXd& c) { return c.dot(mirror_coefficients(Eigen::VectorXd::Ones(c.size()))); }
        double value_at_plus_one(const Eigen::VectorXd& c) { return c.sum(); }

        ValidationReport report_with_probes(const CorrectionPair& cp, const std::vector<Eigen::VectorXd>& probes,
                                            const LebesgueTolerances& tol)
        {
            ValidationReport r;
            for (int i = 0; i < cp.p && i < cp.hl.size(); ++i)
                (i % 2 == 0 ? r.even_sum : r.odd_sum) += cp.hl(i);

            for (const auto& u : probes)
            {
                r.max_abs_il = std::max(r.max_abs_il, std::abs(correction_udu_integral(cp.hl, u)));
                r.max_abs_ir = std::max(r.max_abs_ir, std::abs(correction_udu_integral(cp.hr, u)));
            }

            r.hl_left_residual = std::abs(value_at_minus_one(cp.hl) - 1.0);
            r.hl_right_residual = std::abs(value_at_plus_one(cp.hl));
            r.hr_left_residual = std::abs(value_at_minus_one(cp.hr));
            r.hr_right_residual = std::abs(value_at_plus_one(cp.hr) - 1.0);

            r.parity_ok = std::abs(r.even_sum) < tol.parity && std::abs(r.odd_sum) < tol.parity;
            r.integrals_ok = r.max_abs_il < tol.integral && r.max_abs_ir < tol.integral;
            r.boundary_ok = r.max_boundary_residual() < tol.boundary;
            r.lebesgue_stable = r.parity_ok && r.integrals_ok && r.boundary_ok;
            return r;
        }

        void check_pair_shape(const CorrectionPair& cp)
        {
            if (cp.p < 0 || cp.hl.size() != cp.p + 2 || cp.hr.size() != cp.p + 2)
                throw InvalidArgument("correction pair of order " + std::to_string(cp.p) +
                                      " needs p + 2 coefficients per side");
        }
    } // namespace

    std::string_view to_string(Family family)
    {
        switch (family)
        {
        case Family::osfr: return "osfr";
        case Family::esfr: return "esfr";
        case Family::glsfr: return "glsfr";
        case Family::custom: return "custom";
        }
        return "custom";
    }

    std::optional<Family> family_from_string(std::string_view name)
    {
        for (Family f : {Family::osfr, Family::esfr, Family::glsfr, Family::custom})
            if (to_string(f) == name)
                return f;
        return std::nullopt;
    }

    Eigen::VectorXd mirror_coefficients(const Eigen::VectorXd& coeffs)
    {
        Eigen::VectorXd out = coeffs;
        for (Eigen::Index i = 1; i < out.size(); i += 2)
            out(i) = -out(i);
        return out;
    }

    CorrectionPair CorrectionPair::mirrored(int p, Eigen::VectorXd hl, Family family)
    {
        CorrectionPair cp;
        cp.p = p;
        cp.hr = mirror_coefficients(hl);
        cp.hl = std::move(hl);
        cp.family = family;
        return cp;
    }

    CorrectionPair nodal_dg(int p)
    {
        if (p < 0)
            throw InvalidArgument("order must be non-negative");
        Eigen::VectorXd hl = Eigen::VectorXd::Zero(p + 2);
        hl(p) = 0.5 * sign_pow(p);
        hl(p + 1) = 0.5 * sign_pow(p + 1);
        return CorrectionPair::mirrored(p, std::move(hl), Family::custom);
    }

    CorrectionPair glsfr_from_params(const GlsfrParams& params)
    {
        const int p = params.p;
        if (p < 2)
            throw InvalidArgument("GLSFR needs p >= 2, got p = " + std::to_string(p));
        if (static_cast<int>(params.q.size()) != p - 2)
            throw InvalidArgument("GLSFR at p = " + std::to_string(p) + " takes " + std::to_string(p - 2) +
                                  " free parameters, got " + std::to_string(params.q.size()));
        for (double v : params.q)
            if (!std::isfinite(v))
                throw InvalidArgument("GLSFR parameters must be finite");

        Eigen::VectorXd hl = Eigen::VectorXd::Zero(p + 2);
        for (int i = 0; i <= p - 3; ++i)
        {
            const double qi = params.q[static_cast<std::size_t>(i)];
            hl(i) = qi;
            // q[i] is cancelled by whichever closure index shares its parity.
            if (i % 2 == (p - 2) % 2)
                hl(p - 2) -= qi;
            else
                hl(p - 1) -= qi;
        }
        hl(p) = 0.5 * sign_pow(p);
        hl(p + 1) = 0.5 * sign_pow(p + 1);

        CorrectionPair cp = CorrectionPair::mirrored(p, std::move(hl), Family::glsfr);
        cp.unique_member = (p == 2);
        return cp;
    }

    double osfr_eta(int p, double iota)
    {
        return iota * (2.0 * p + 1.0) * ap_factorial_squared(p) / 2.0;
    }

    CorrectionPair osfr(int p, double iota)
    {
        if (p < 1)
            throw InvalidArgument("OSFR needs p >= 1, got p = " + std::to_string(p));
        const double eta = osfr_eta(p, iota);
        if (!std::isfinite(eta) || std::abs(1.0 + eta) < 1e-12)
            throw SingularMatrixError("OSFR parameter iota = " + std::to_string(iota) + " makes 1 + eta_p vanish");

        // h_L = (-1)^p / 2 [psi_p - (eta psi_{p-1} + psi_{p+1}) / (1 + eta)]
        Eigen::VectorXd hl = Eigen::VectorXd::Zero(p + 2);
        const double s = 0.5 * sign_pow(p);
        hl(p - 1) = -s * eta / (1.0 + eta);
        hl(p) = s;
        hl(p + 1) = -s / (1.0 + eta);
        return CorrectionPair::mirrored(p, std::move(hl), Family::osfr);
    }

    EsfrK osfr_equivalent_k(int p, double iota)
    {
        EsfrK ek{p, Eigen::MatrixXd::Zero(p + 1, p + 1)};
        ek.K(p, p) = iota * ap_factorial_squared(p);
        return ek;
    }

    void validate_esfr_k(const EsfrK& ek, const OperatorSet& ops)
    {
        const Eigen::Index n = ops.p + 1;
        if (ek.p != ops.p || ek.K.rows() != n || ek.K.cols() != n)
            throw InvalidArgument("K must be (p+1) x (p+1) for the operator order");

        const double sym = (ek.K - ek.K.transpose()).cwiseAbs().maxCoeff();
        if (!(sym <= 1e-12))
            throw ConditionViolation("symmetry", "K is not symmetric (max |K - K^T| = " + std::to_string(sym) + ")");

        const Eigen::MatrixXd KD = ek.K * ops.modal_derivative();
        const double skew = (KD + KD.transpose()).cwiseAbs().maxCoeff();
        if (!(skew <= 1e-10))
            throw ConditionViolation("skew_derivative",
                                     "K Dm + (K Dm)^T != 0 (max entry " + std::to_string(skew) + ")");

        const Eigen::MatrixXd MK = ops.mass_matrix() + ek.K;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (MK + MK.transpose()), Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues().minCoeff();
        if (!(lmin > 1e-12))
            throw ConditionViolation("positive_definite",
                                     "M + K is not positive definite (min eigenvalue " + std::to_string(lmin) + ")");
    }

    CorrectionPair esfr_from_K(const EsfrK& ek, const OperatorSet& ops)
    {
        validate_esfr_k(ek, ops);
        const int p = ops.p;
        const Eigen::VectorXd l_tilde = legendre_values(p, -1.0);
        const Eigen::VectorXd r_tilde = legendre_values(p, 1.0);

        const Eigen::LDLT<Eigen::MatrixXd> solver(ops.mass_matrix() + ek.K);
        const Eigen::VectorXd gl = -solver.solve(l_tilde);
        const Eigen::VectorXd gr = solver.solve(r_tilde);

        Eigen::VectorXd hl = antiderivative(gl);
        hl(0) -= value_at_plus_one(hl);
        Eigen::VectorXd hr = antiderivative(gr);
        hr(0) -= value_at_minus_one(hr);

        if (std::abs(value_at_minus_one(hl) - 1.0) > 1e-10 || std::abs(value_at_plus_one(hr) - 1.0) > 1e-10)
            throw BoundaryClosureError("ESFR correction does not reach h_L(-1) = 1 / h_R(1) = 1");

        CorrectionPair cp;
        cp.p = p;
        cp.hl = std::move(hl);
        cp.hr = std::move(hr);
        cp.family = Family::esfr;
        return cp;
    }

    CorrectionValues eval_correction(const CorrectionPair& cp, double xi)
    {
        check_pair_shape(cp);
        return {legendre_series(cp.hl, xi), legendre_series(cp.hr, xi)};
    }

    CorrectionGradients correction_gradients(const CorrectionPair& cp, const NodeSet& ns)
    {
        check_pair_shape(cp);
        if (ns.order() != cp.p)
            throw InvalidArgument("node set order does not match the correction order");
        CorrectionGradients g{Eigen::VectorXd(ns.size()), Eigen::VectorXd(ns.size())};
        for (int i = 0; i < ns.size(); ++i)
        {
            g.g_l(i) = legendre_series_deriv(cp.hl, ns.node(i));
            g.g_r(i) = legendre_series_deriv(cp.hr, ns.node(i));
        }
        return g;
    }

    double correction_udu_integral(const Eigen::VectorXd& h_coeffs, const Eigen::VectorXd& u_coeffs)
    {
        if (h_coeffs.size() == 0 || u_coeffs.size() < 2)
            return 0.0;
        const auto degree = (h_coeffs.size() - 1) + (u_coeffs.size() - 2);
        const int n_points = static_cast<int>(degree / 2 + 1);
        const NodeSet rule = gauss_legendre_points(n_points);
        double sum = 0.0;
        for (int q = 0; q < rule.size(); ++q)
            sum += rule.weight(q) * legendre_series(h_coeffs, rule.node(q)) *
                   legendre_series_deriv(u_coeffs, rule.node(q));
        return sum;
    }

    double ValidationReport::max_boundary_residual() const
    {
        return std::max({hl_left_residual, hl_right_residual, hr_left_residual, hr_right_residual});
    }

    ValidationReport validate_lebesgue(const CorrectionPair& cp, const LebesgueTolerances& tol, std::uint64_t seed)
    {
        check_pair_shape(cp);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<Eigen::VectorXd> probes;
        for (int k = 0; k <= cp.p; ++k)
        {
            Eigen::VectorXd u(cp.p + 1);
            for (auto& c : u)
                c = dist(rng);
            probes.push_back(std::move(u));
        }
        return report_with_probes(cp, probes, tol);
    }

    ValidationReport validate_lebesgue_monomials(const CorrectionPair& cp, const LebesgueTolerances& tol)
    {
        check_pair_shape(cp);
        // Legendre coefficients of xi^m via projection with an exact Gauss rule.
        const NodeSet rule = gauss_legendre_points(cp.p + 1);
        std::vector<Eigen::VectorXd> probes;
        for (int m = 0; m <= cp.p; ++m)
        {
            Eigen::VectorXd u = Eigen::VectorXd::Zero(cp.p + 1);
            for (int q = 0; q < rule.size(); ++q)
                u += rule.weight(q) * std::pow(rule.node(q), m) * legendre_values(cp.p, rule.node(q));
            for (int i = 0; i <= cp.p; ++i)
                u(i) *= (2.0 * i + 1.0) / 2.0;
            probes.push_back(std::move(u));
        }
        return report_with_probes(cp, probes, tol);
    }

    void check_boundary_conditions(const CorrectionPair& cp, double tol)
    {
        check_pair_shape(cp);
        const ValidationReport r = report_with_probes(cp, {}, LebesgueTolerances{});
        if (!(r.max_boundary_residual() <= tol))
            throw BoundaryClosureError("correction boundary values violated (max residual " +
                                       std::to_string(r.max_boundary_residual()) + ")");
    }
} // namespace frlab

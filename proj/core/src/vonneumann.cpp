#include "frlab/vonneumann.hpp"

#include "frlab/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace frlab
{
    namespace
    {
        constexpr cplx I{0.0, 1.0};
        constexpr double pi = std::numbers::pi;

        void check_wavenumber(const SchemeConfig& cfg, double k)
        {
            if (!(k > 0.0) || k > cfg.k_nyquist() * (1.0 + 1e-12))
                throw DomainError("wavenumber k = " + std::to_string(k) + " outside (0, k_nq = " +
                                  std::to_string(cfg.k_nyquist()) + "]");
        }

        double weighted_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& w)
        {
            cplx dot{0.0, 0.0};
            double na = 0.0, nb = 0.0;
            for (Eigen::Index i = 0; i < a.size(); ++i)
            {
                dot += w(i) * std::conj(b(i)) * a(i);
                na += w(i) * std::norm(a(i));
                nb += w(i) * std::norm(b(i));
            }
            if (na == 0.0 || nb == 0.0)
                return 0.0;
            return std::abs(dot) / std::sqrt(na * nb);
        }

        int argmax(const Eigen::VectorXd& v)
        {
            Eigen::Index idx = 0;
            v.maxCoeff(&idx);
            return static_cast<int>(idx);
        }

        // Per-k operator pieces that do not depend on k, built once per scheme.
        struct SchemeOperators
        {
            AdvectionOps adv;
            AdvectionOps dif;
            DiffusionBlocks blocks;
        };

        SchemeOperators scheme_operators(const SchemeConfig& cfg, const CorrectionPair& cp)
        {
            SchemeOperators so{assemble_advection(cfg, cp), assemble_diffusion(cfg, cp), {}};
            so.blocks = diffusion_blocks(so.dif);
            return so;
        }

        Eigen::MatrixXcd blocks_symbol(const DiffusionBlocks& b, double theta)
        {
            return std::exp(-2.0 * I * theta) * b.B_m2.cast<cplx>() + std::exp(-I * theta) * b.B_m1.cast<cplx>() +
                   b.B_0.cast<cplx>() + std::exp(I * theta) * b.B_p1.cast<cplx>() +
                   std::exp(2.0 * I * theta) * b.B_p2.cast<cplx>();
        }

        Eigen::MatrixXcd operator_at(const SchemeConfig& cfg, const SchemeOperators& so, double k)
        {
            const double theta = k * cfg.h;
            const double jinv = 1.0 / cfg.jacobian();
            Eigen::MatrixXcd Q = (-cfg.c * jinv) * derivative_symbol(so.adv, theta);
            if (cfg.nu != 0.0)
                Q += (cfg.nu * jinv * jinv) * blocks_symbol(so.blocks, theta);
            return Q;
        }

        double sample_theta(const SchemeConfig& cfg, int m, int n) { return pi * m / n * (cfg.p() + 1); }

        // Eigenvalues of the physical operator, pre-scaled so that tau * lambda = tau_hat * value.
        std::vector<cplx> normalised_spectrum(const SchemeConfig& cfg, const CorrectionPair& cp, int k_samples)
        {
            if (k_samples < 1)
                throw InvalidArgument("need at least one wavenumber sample");
            const double rate = 2.0 * std::abs(cfg.c) / cfg.h + 4.0 * cfg.nu / (cfg.h * cfg.h);
            if (!(rate > 0.0))
                throw InvalidArgument("tau_hat normalisation needs c != 0 or nu > 0");
            const SchemeOperators so = scheme_operators(cfg, cp);
            std::vector<cplx> out;
            out.reserve(static_cast<std::size_t>(k_samples * (cfg.p() + 1)));
            for (int m = 1; m <= k_samples; ++m)
            {
                const double k = sample_theta(cfg, m, k_samples) / cfg.h;
                Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(operator_at(cfg, so, k), false);
                for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                    out.push_back(es.eigenvalues()(i) / rate);
            }
            return out;
        }

        double max_abs_polynomial(const std::vector<cplx>& spectrum, double tau_hat, StabilityOrder order)
        {
            double worst = 0.0;
            for (const cplx& l : spectrum)
                worst = std::max(worst, std::abs(stability_polynomial(tau_hat * l, order)));
            return worst;
        }

        struct Resolved
        {
            SpectralSample sample;
            ModeDecomposition modes;
        };

        enum class Selection
        {
            projection,
            tracking,
        };

        Resolved resolve_sample(const SchemeConfig& cfg, const SchemeOperators& so, const CorrectionPair&,
                                SweepKind kind, double k, double tau, StabilityOrder order, Selection selection,
                                const Eigen::VectorXcd* previous)
        {
            check_wavenumber(cfg, k);
            const double theta = k * cfg.h;
            const double k_hat = cfg.k_hat(k);
            const int n = cfg.p() + 1;

            Resolved r;
            r.sample.k = k;
            r.sample.k_hat = k_hat;

            Eigen::MatrixXcd Q;
            if (kind == SweepKind::semi_diffusion)
            {
                const double jinv = 1.0 / cfg.jacobian();
                Q = (jinv * jinv) * blocks_symbol(so.blocks, theta);
            }
            else
            {
                if (cfg.c == 0.0)
                    throw InvalidArgument("advection dispersion needs a non-zero advection speed");
                Q = operator_at(cfg, so, k);
            }
            r.modes = decompose(Q);

            int phys = 0;
            if (n > 1)
            {
                if (selection == Selection::tracking && previous != nullptr)
                {
                    Eigen::VectorXd ov(n);
                    for (int j = 0; j < n; ++j)
                        ov(j) = weighted_overlap(r.modes.vectors.col(j), *previous, cfg.ns.weight_vector());
                    phys = argmax(ov);
                }
                else
                {
                    phys = physical_mode(r.modes, cfg.ns, theta);
                }
            }
            r.sample.physical_index = phys;

            r.sample.mode_values.resize(n);
            switch (kind)
            {
            case SweepKind::semi_advection:
                r.sample.eigenvalues = r.modes.values;
                for (int j = 0; j < n; ++j)
                    r.sample.mode_values(j) = I * r.modes.values(j) / (cfg.c * k) * k_hat;
                r.sample.dispersion = r.sample.mode_values(phys).real();
                r.sample.dissipation = r.sample.mode_values(phys).imag();
                break;
            case SweepKind::semi_diffusion:
                r.sample.eigenvalues = -r.modes.values / (k * k);
                for (int j = 0; j < n; ++j)
                    r.sample.mode_values(j) = k_hat * k_hat * r.sample.eigenvalues(j);
                r.sample.dissipation = r.sample.mode_values(phys).real();
                r.sample.dispersion = r.sample.mode_values(phys).imag();
                break;
            case SweepKind::fully_discrete:
            {
                if (!(tau > 0.0))
                    throw InvalidArgument("time step must be positive");
                r.sample.eigenvalues.resize(n);
                const cplx shift = std::exp(I * k * cfg.c * tau);
                for (int j = 0; j < n; ++j)
                {
                    const cplx lambda = shift * stability_polynomial(tau * r.modes.values(j), order);
                    if (lambda == cplx{0.0, 0.0})
                        throw DegenerateModeError("update-matrix eigenvalue is exactly zero");
                    r.sample.eigenvalues(j) = lambda;
                    const cplx cvel = (I * std::log(lambda) / (k * tau) + cfg.c) / cfg.c;
                    r.sample.mode_values(j) = k_hat * cvel;
                }
                r.sample.phase_velocity = r.sample.mode_values(phys) / k_hat;
                r.sample.dispersion = r.sample.mode_values(phys).real();
                r.sample.dissipation = r.sample.mode_values(phys).imag();
                break;
            }
            }
            return r;
        }
    } // namespace

    void SchemeConfig::validate() const
    {
        if (!(alpha_a >= 0.5 && alpha_a <= 1.0))
            throw InvalidArgument("advection upwinding ratio must lie in [0.5, 1]");
        if (std::abs(alpha_d - 0.5) > 1e-15)
            throw InvalidArgument("diffusion uses BR1 interfaces (alpha_d = 0.5)");
        if (!(h > 0.0) || !std::isfinite(h))
            throw InvalidArgument("element width must be positive");
        if (!(nu >= 0.0) || !std::isfinite(nu))
            throw InvalidArgument("diffusion constant must be non-negative");
        if (!std::isfinite(c))
            throw InvalidArgument("advection speed must be finite");
    }

    SchemeConfig scheme_for_order(int p)
    {
        if (p < 0)
            throw InvalidArgument("order must be non-negative");
        return SchemeConfig{gauss_legendre_points(p + 1)};
    }

    AdvectionOps assemble_interface_ops(const NodeSet& ns, const CorrectionPair& cp, double alpha)
    {
        const OperatorSet ops = build_operators(ns);
        const CorrectionGradients g = correction_gradients(cp, ns);
        AdvectionOps a;
        a.alpha = alpha;
        a.C_plus = (1.0 - alpha) * g.g_r * ops.l_left.transpose();
        a.C_zero = ops.D - alpha * g.g_l * ops.l_left.transpose() - (1.0 - alpha) * g.g_r * ops.l_right.transpose();
        a.C_minus = alpha * g.g_l * ops.l_right.transpose();
        return a;
    }

    AdvectionOps assemble_advection(const SchemeConfig& cfg, const CorrectionPair& cp)
    {
        cfg.validate();
        const double alpha = cfg.c >= 0.0 ? cfg.alpha_a : 1.0 - cfg.alpha_a;
        return assemble_interface_ops(cfg.ns, cp, alpha);
    }

    AdvectionOps assemble_diffusion(const SchemeConfig& cfg, const CorrectionPair& cp)
    {
        cfg.validate();
        return assemble_interface_ops(cfg.ns, cp, cfg.alpha_d);
    }

    DiffusionBlocks diffusion_blocks(const AdvectionOps& ops)
    {
        const auto& Cm = ops.C_minus;
        const auto& C0 = ops.C_zero;
        const auto& Cp = ops.C_plus;
        return DiffusionBlocks{
            Cm * Cm,
            Cm * C0 + C0 * Cm,
            Cm * Cp + C0 * C0 + Cp * Cm,
            C0 * Cp + Cp * C0,
            Cp * Cp,
        };
    }

    Eigen::MatrixXcd derivative_symbol(const AdvectionOps& ops, double theta)
    {
        return std::exp(I * theta) * ops.C_plus.cast<cplx>() + ops.C_zero.cast<cplx>() +
               std::exp(-I * theta) * ops.C_minus.cast<cplx>();
    }

    Eigen::MatrixXcd advection_symbol(const AdvectionOps& ops, const SchemeConfig& cfg, double k)
    {
        check_wavenumber(cfg, k);
        return (-1.0 / cfg.jacobian()) * derivative_symbol(ops, k * cfg.h);
    }

    Eigen::MatrixXcd diffusion_symbol(const AdvectionOps& ops, const SchemeConfig& cfg, double k)
    {
        check_wavenumber(cfg, k);
        if (std::abs(ops.alpha - 0.5) > 1e-15)
            throw InvalidArgument("diffusion symbol needs BR1 operators (alpha = 0.5)");
        const double jinv = 1.0 / cfg.jacobian();
        return (jinv * jinv) * blocks_symbol(diffusion_blocks(ops), k * cfg.h);
    }

    Eigen::MatrixXcd advdiff_symbol(const SchemeConfig& cfg, const Eigen::MatrixXcd& Qa, const Eigen::MatrixXcd& Qd)
    {
        if (Qa.rows() != Qd.rows() || Qa.cols() != Qd.cols())
            throw InvalidArgument("advection and diffusion symbols differ in shape");
        return (2.0 * cfg.c) * Qa + (4.0 * cfg.nu) * Qd;
    }

    Eigen::MatrixXcd physical_operator(const SchemeConfig& cfg, const CorrectionPair& cp, double k)
    {
        check_wavenumber(cfg, k);
        return operator_at(cfg, scheme_operators(cfg, cp), k);
    }

    StabilityOrder stability_order(int order)
    {
        if (order == 3)
            return StabilityOrder::rk3;
        if (order == 4)
            return StabilityOrder::rk4;
        throw InvalidArgument("stability polynomial order must be 3 or 4, got " + std::to_string(order));
    }

    UpdateMatrix update_matrix(const Eigen::MatrixXcd& Q, double tau, StabilityOrder order)
    {
        if (!(tau > 0.0))
            throw InvalidArgument("time step must be positive");
        const Eigen::Index n = Q.rows();
        const Eigen::MatrixXcd tQ = tau * Q;
        Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
        for (int m = 1; m <= static_cast<int>(order); ++m)
        {
            term = (tQ * term) / static_cast<double>(m);
            R += term;
        }
        return {R, tau, order};
    }

    cplx stability_polynomial(cplx z, StabilityOrder order)
    {
        cplx sum{1.0, 0.0}, term{1.0, 0.0};
        for (int m = 1; m <= static_cast<int>(order); ++m)
        {
            term *= z / static_cast<double>(m);
            sum += term;
        }
        return sum;
    }

    ModeDecomposition decompose(const Eigen::MatrixXcd& Q)
    {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Q);
        if (es.info() != Eigen::Success)
            throw Error("eigenvalue decomposition did not converge");
        ModeDecomposition m{es.eigenvalues(), es.eigenvectors()};
        for (Eigen::Index j = 0; j < m.vectors.cols(); ++j)
        {
            const double nrm = m.vectors.col(j).norm();
            if (nrm > 0.0)
                m.vectors.col(j) /= nrm;
        }
        return m;
    }

    Eigen::VectorXd fourier_overlaps(const ModeDecomposition& modes, const NodeSet& ns, double theta)
    {
        Eigen::VectorXcd wave(ns.size());
        for (int i = 0; i < ns.size(); ++i)
            wave(i) = std::exp(I * (0.5 * theta * ns.node(i)));
        Eigen::VectorXd ov(modes.vectors.cols());
        for (Eigen::Index j = 0; j < modes.vectors.cols(); ++j)
            ov(j) = weighted_overlap(modes.vectors.col(j), wave, ns.weight_vector());
        return ov;
    }

    int physical_mode(const ModeDecomposition& modes, const NodeSet& ns, double theta)
    {
        const Eigen::Index n = modes.vectors.cols();
        if (n == 1)
            return 0;
        const Eigen::VectorXd ov = fourier_overlaps(modes, ns, theta);
        int best = argmax(ov);
        int second = -1;
        for (int j = 0; j < n; ++j)
            if (j != best && (second < 0 || ov(j) > ov(second)))
                second = j;
        if (ov(best) - ov(second) < 1e-9)
            throw AmbiguousModeError(best, second,
                                     "physical mode is ambiguous between modes " + std::to_string(best) + " and " +
                                         std::to_string(second));
        return best;
    }

    SpectralSample semi_discrete_dispersion(const SchemeConfig& cfg, const CorrectionPair& cp, double k)
    {
        if (cfg.nu != 0.0)
            throw InvalidArgument("semi-discrete advection dispersion requires nu = 0");
        return resolve_sample(cfg, scheme_operators(cfg, cp), cp, SweepKind::semi_advection, k, 0.0,
                              StabilityOrder::rk4, Selection::projection, nullptr)
            .sample;
    }

    SpectralSample diffusion_dispersion(const SchemeConfig& cfg, const CorrectionPair& cp, double k)
    {
        return resolve_sample(cfg, scheme_operators(cfg, cp), cp, SweepKind::semi_diffusion, k, 0.0,
                              StabilityOrder::rk4, Selection::projection, nullptr)
            .sample;
    }

    SpectralSample fully_discrete_dispersion(const SchemeConfig& cfg, const CorrectionPair& cp, double tau, double k,
                                             StabilityOrder order)
    {
        return resolve_sample(cfg, scheme_operators(cfg, cp), cp, SweepKind::fully_discrete, k, tau, order,
                              Selection::projection, nullptr)
            .sample;
    }

    std::vector<SpectralSample> dispersion_sweep(const SchemeConfig& cfg, const CorrectionPair& cp,
                                                 const SweepOptions& opts)
    {
        if (opts.n_k < 1)
            throw InvalidArgument("sweep needs at least one wavenumber");
        if (opts.kind == SweepKind::semi_advection && cfg.nu != 0.0)
            throw InvalidArgument("semi-discrete advection dispersion requires nu = 0");
        const SchemeOperators so = scheme_operators(cfg, cp);
        std::vector<SpectralSample> out;
        out.reserve(static_cast<std::size_t>(opts.n_k));
        Eigen::VectorXcd previous;
        double unwrap = 0.0;
        double last_arg = 0.0;
        for (int m = 1; m <= opts.n_k; ++m)
        {
            const double k = cfg.k_from_hat(pi * m / opts.n_k);
            const bool first = (m == 1);
            Resolved r = resolve_sample(cfg, so, cp, opts.kind, k, opts.tau, opts.order,
                                        first ? Selection::projection : Selection::tracking,
                                        first ? nullptr : &previous);
            const int phys = r.sample.physical_index;
            previous = r.modes.vectors.col(phys);

            if (opts.kind == SweepKind::fully_discrete)
            {
                // Keep arg(lambda) continuous along the sweep for the physical mode.
                const cplx lambda = r.sample.eigenvalues(phys);
                const double arg = std::arg(lambda);
                if (!first)
                {
                    const double jump = arg - last_arg;
                    if (jump > pi)
                        unwrap -= 2.0 * pi;
                    else if (jump < -pi)
                        unwrap += 2.0 * pi;
                }
                last_arg = arg;
                if (unwrap != 0.0)
                {
                    const cplx log_l{std::log(std::abs(lambda)), arg + unwrap};
                    const cplx cvel = (I * log_l / (k * opts.tau) + cfg.c) / cfg.c;
                    r.sample.mode_values(phys) = r.sample.k_hat * cvel;
                    r.sample.phase_velocity = cvel;
                    r.sample.dispersion = r.sample.mode_values(phys).real();
                    r.sample.dissipation = r.sample.mode_values(phys).imag();
                }
            }
            out.push_back(std::move(r.sample));
        }
        return out;
    }

    double max_amplification(const SchemeConfig& cfg, const CorrectionPair& cp, double tau_hat, StabilityOrder order,
                             int k_samples)
    {
        return max_abs_polynomial(normalised_spectrum(cfg, cp, k_samples), tau_hat, order);
    }

    double cfl_limit(const SchemeConfig& cfg, const CorrectionPair& cp, StabilityOrder order, int k_samples,
                     const CflSearch& search)
    {
        const std::vector<cplx> spectrum = normalised_spectrum(cfg, cp, k_samples);
        const auto stable = [&](double t) { return max_abs_polynomial(spectrum, t, order) <= 1.0 + search.slack; };

        double hi = search.initial_hi;
        while (stable(hi))
        {
            if (hi >= search.max_hi)
                return hi;
            hi *= 2.0;
        }

        // The stable set need not be an interval (RK stability regions reach into
        // Re z > 0), so locate the largest stable scan point before bisecting.
        const int n = std::max(search.scan_points, 1);
        double lo = 0.0;
        double up = hi / n;
        for (int i = n - 1; i >= 1; --i)
        {
            const double t = hi * i / n;
            if (stable(t))
            {
                lo = t;
                up = hi * (i + 1) / n;
                break;
            }
        }
        while (up - lo > search.tolerance)
        {
            const double mid = 0.5 * (lo + up);
            if (stable(mid))
                lo = mid;
            else
                up = mid;
        }
        if (lo < search.min_tau_hat)
            return stable(search.min_tau_hat) ? search.min_tau_hat : 0.0;
        return lo;
    }

    bool small_step_stable(const SchemeConfig& cfg, const CorrectionPair& cp, StabilityOrder order, int k_samples,
                           const CflSearch& search)
    {
        return max_amplification(cfg, cp, search.min_tau_hat, order, k_samples) <= 1.0 + search.slack;
    }

    double max_growth_rate(const SchemeConfig& cfg, const CorrectionPair& cp, int k_samples)
    {
        const SchemeOperators so = scheme_operators(cfg, cp);
        double worst = -std::numeric_limits<double>::infinity();
        for (int m = 1; m <= k_samples; ++m)
        {
            const double k = sample_theta(cfg, m, k_samples) / cfg.h;
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(operator_at(cfg, so, k), false);
            worst = std::max(worst, es.eigenvalues().real().maxCoeff());
        }
        return worst;
    }

    std::vector<double> linspace(double lo, double hi, int n)
    {
        if (n < 1)
            throw InvalidArgument("linspace needs n >= 1");
        std::vector<double> v(static_cast<std::size_t>(n));
        if (n == 1)
        {
            v[0] = lo;
            return v;
        }
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
        v.back() = hi;
        return v;
    }

    CflMap cfl_map(const SchemeConfig& cfg, const CflMapRequest& req)
    {
        const int p = cfg.p();
        if (p != 3 && p != 4)
            throw InvalidArgument("CFL maps cover p = 3 (one parameter) or p = 4 (two parameters)");
        if (req.n_h0 < 1 || req.n_h1 < 1 || !(req.h0_lo <= req.h0_hi) || !(req.h1_lo <= req.h1_hi))
            throw InvalidArgument("CFL map ranges must be ordered with a positive resolution");

        CflMap map;
        map.h0 = linspace(req.h0_lo, req.h0_hi, req.n_h0);
        map.h1 = (p == 4) ? linspace(req.h1_lo, req.h1_hi, req.n_h1) : std::vector<double>{0.0};
        const auto rows = static_cast<int>(map.h0.size());
        const auto cols = static_cast<int>(map.h1.size());
        map.tau_hat = Eigen::MatrixXd::Zero(rows, cols);

        std::atomic<int> next{0};
        const auto work = [&]() {
            for (int cell = next++; cell < rows * cols; cell = next++)
            {
                const int r = cell / cols, c = cell % cols;
                GlsfrParams gp{p, {map.h0[static_cast<std::size_t>(r)]}};
                if (p == 4)
                    gp.q.push_back(map.h1[static_cast<std::size_t>(c)]);
                map.tau_hat(r, c) = cfl_limit(cfg, glsfr_from_params(gp), req.order, req.k_samples, req.search);
            }
        };
        const int jobs = std::max(1, std::min(req.jobs, rows * cols));
        if (jobs == 1)
        {
            work();
        }
        else
        {
            std::vector<std::jthread> pool;
            for (int j = 0; j < jobs; ++j)
                pool.emplace_back(work);
        }
        return map;
    }
} // namespace frlab

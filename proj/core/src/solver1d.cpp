#include "frlab/solver1d.hpp"

#include "frlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace frlab
{
    void Mesh1D::validate() const
    {
        if (n_elem < 2)
            throw InvalidArgument("a periodic mesh needs at least two elements");
        if (!(x_right > x_left) || !std::isfinite(x_left) || !std::isfinite(x_right))
            throw InvalidArgument("mesh bounds must satisfy x_left < x_right");
    }

    Solver1D::Solver1D(const Mesh1D& mesh, SchemeConfig cfg, CorrectionPair cp)
        : mesh_(mesh), cfg_(std::move(cfg)), cp_(std::move(cp)), quad_(gauss_legendre_points(1))
    {
        mesh_.validate();
        cfg_.h = mesh_.h();
        cfg_.validate();
        if (cp_.p != cfg_.p())
            throw InvalidArgument("correction order " + std::to_string(cp_.p) + " does not match scheme order " +
                                  std::to_string(cfg_.p()));
        ops_ = build_operators(cfg_.ns);
        g_ = correction_gradients(cp_, cfg_.ns);
        quad_ = gauss_legendre_points(cfg_.p() + 1);
        to_quad_ = cfg_.ns.is_gauss() ? Eigen::MatrixXd::Identity(cfg_.ns.size(), cfg_.ns.size())
                                      : interpolation_matrix(cfg_.ns, quad_);
        alpha_upwind_ = cfg_.c >= 0.0 ? cfg_.alpha_a : 1.0 - cfg_.alpha_a;
    }

    double Solver1D::x(int e, int i) const
    {
        return mesh_.x_left + (e + 0.5 * (cfg_.ns.node(i) + 1.0)) * mesh_.h();
    }

    Eigen::MatrixXd Solver1D::coordinates() const
    {
        Eigen::MatrixXd xs(mesh_.n_elem, cfg_.ns.size());
        for (int e = 0; e < mesh_.n_elem; ++e)
            for (int i = 0; i < cfg_.ns.size(); ++i)
                xs(e, i) = x(e, i);
        return xs;
    }

    SolverState Solver1D::project(const std::function<double(double)>& f) const
    {
        return make_state(coordinates().unaryExpr([&](double xv) { return f(xv); }));
    }

    SolverState Solver1D::make_state(Eigen::MatrixXd u, double t) const
    {
        check_shape(u);
        return SolverState{std::move(u), t, cfg_, cp_};
    }

    void Solver1D::check_shape(const Eigen::MatrixXd& u) const
    {
        if (u.rows() != mesh_.n_elem || u.cols() != cfg_.ns.size())
            throw InvalidArgument("state shape " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                                  " does not match mesh " + std::to_string(mesh_.n_elem) + "x" +
                                  std::to_string(cfg_.ns.size()));
    }

    Eigen::MatrixXd Solver1D::derivative(const Eigen::MatrixXd& u, double alpha) const
    {
        check_shape(u);
        const int ne = mesh_.n_elem;
        // Offsets from each element's first nodal value.
        const Eigen::VectorXd base = u.col(0);
        const Eigen::MatrixXd v = u.colwise() - base;
        const Eigen::VectorXd ul = base + v * ops_.l_left;
        const Eigen::VectorXd ur = base + v * ops_.l_right;
        Eigen::VectorXd jump_l(ne), jump_r(ne);
        for (int e = 0; e < ne; ++e)
        {
            const int prev = (e + ne - 1) % ne;
            const int next = (e + 1) % ne;
            jump_l(e) = alpha * (ur(prev) - ul(e));
            jump_r(e) = (1.0 - alpha) * (ul(next) - ur(e));
        }
        Eigen::MatrixXd du = v * ops_.D.transpose();
        du.noalias() += jump_l * g_.g_l.transpose();
        du.noalias() += jump_r * g_.g_r.transpose();
        return du / mesh_.jacobian();
    }

    Eigen::MatrixXd Solver1D::rhs_advection(const Eigen::MatrixXd& u) const
    {
        return -cfg_.c * derivative(u, alpha_upwind_);
    }

    Eigen::MatrixXd Solver1D::rhs_advdiff(const Eigen::MatrixXd& u) const
    {
        Eigen::MatrixXd r = rhs_advection(u);
        if (cfg_.nu != 0.0)
            r += cfg_.nu * derivative(derivative(u, cfg_.alpha_d), cfg_.alpha_d);
        return r;
    }

    Eigen::MatrixXd Solver1D::rhs(const Eigen::MatrixXd& u) const
    {
        return cfg_.nu != 0.0 ? rhs_advdiff(u) : rhs_advection(u);
    }

    void Solver1D::rk44_step(SolverState& s, double tau) const
    {
        if (!(tau > 0.0))
            throw InvalidArgument("time step must be positive");
        const Eigen::MatrixXd k1 = rhs(s.u);
        const Eigen::MatrixXd k2 = rhs(s.u + 0.5 * tau * k1);
        const Eigen::MatrixXd k3 = rhs(s.u + 0.5 * tau * k2);
        const Eigen::MatrixXd k4 = rhs(s.u + tau * k3);
        s.u += (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s.t += tau;
    }

    Eigen::MatrixXd Solver1D::at_quadrature(const Eigen::MatrixXd& u) const
    {
        check_shape(u);
        return u * to_quad_.transpose();
    }

    double Solver1D::energy(const Eigen::MatrixXd& u) const
    {
        const Eigen::MatrixXd uq = at_quadrature(u);
        return mesh_.jacobian() * (uq.array().square().matrix() * quad_.weight_vector()).sum();
    }

    double Solver1D::total_mass(const Eigen::MatrixXd& u) const
    {
        return mesh_.jacobian() * (at_quadrature(u) * quad_.weight_vector()).sum();
    }

    double Solver1D::l2_error(const SolverState& s, const std::function<double(double, double)>& exact) const
    {
        check_shape(s.u);
        const NodeSet fine = gauss_legendre_points(cfg_.p() + 4);
        const Eigen::MatrixXd interp = interpolation_matrix(cfg_.ns, fine);
        const Eigen::MatrixXd uq = s.u * interp.transpose();
        double sum = 0.0;
        for (int e = 0; e < mesh_.n_elem; ++e)
            for (int q = 0; q < fine.size(); ++q)
            {
                const double xq = mesh_.x_left + (e + 0.5 * (fine.node(q) + 1.0)) * mesh_.h();
                const double d = uq(e, q) - exact(xq, s.t);
                sum += fine.weight(q) * d * d;
            }
        return std::sqrt(mesh_.jacobian() * sum);
    }

    namespace
    {
        Solver1D solver_for(const SolverState& s)
        {
            if (!(s.cfg.h > 0.0))
                throw InvalidArgument("state carries a non-positive element width");
            const auto ne = static_cast<int>(s.u.rows());
            return Solver1D(Mesh1D{ne, 0.0, ne * s.cfg.h}, s.cfg, s.cp);
        }
    } // namespace

    SolverState project_initial(const Mesh1D& mesh, const SchemeConfig& cfg, const CorrectionPair& cp,
                                const std::function<double(double)>& f)
    {
        return Solver1D(mesh, cfg, cp).project(f);
    }

    Eigen::MatrixXd rhs_advection(const SolverState& s) { return solver_for(s).rhs_advection(s.u); }

    Eigen::MatrixXd rhs_advdiff(const SolverState& s) { return solver_for(s).rhs_advdiff(s.u); }

    SolverState rk44_step(const SolverState& s, double tau)
    {
        SolverState next = s;
        solver_for(s).rk44_step(next, tau);
        return next;
    }

    double energy(const SolverState& s) { return solver_for(s).energy(s.u); }

    double total_mass(const SolverState& s) { return solver_for(s).total_mass(s.u); }

    EnergyRate energy_rate(const SolverState& s)
    {
        if (s.cfg.nu != 0.0)
            throw InvalidArgument("energy rate is defined for linear advection (nu = 0)");
        const Solver1D solver = solver_for(s);
        const OperatorSet& ops = solver.operators();
        const int ne = static_cast<int>(s.u.rows());
        const double c = s.cfg.c;
        const double alpha = c >= 0.0 ? s.cfg.alpha_a : 1.0 - s.cfg.alpha_a;
        const double J = 0.5 * s.cfg.h;

        const Eigen::MatrixXd dudt = solver.rhs_advection(s.u);
        const NodeSet quad = gauss_legendre_points(s.cfg.p() + 1);
        const Eigen::MatrixXd to_quad = interpolation_matrix(s.cfg.ns, quad);
        const Eigen::MatrixXd uq = s.u * to_quad.transpose();
        const Eigen::MatrixXd dq = dudt * to_quad.transpose();
        const Eigen::VectorXd ul = s.u * ops.l_left;
        const Eigen::VectorXd ur = s.u * ops.l_right;

        EnergyRate r;
        r.element_quadrature.resize(static_cast<std::size_t>(ne));
        r.element_boundary_transfer.resize(static_cast<std::size_t>(ne));
        r.element_correction_terms.resize(static_cast<std::size_t>(ne));
        for (int e = 0; e < ne; ++e)
        {
            const int prev = (e + ne - 1) % ne;
            const int next = (e + 1) % ne;
            const double uil = alpha * ur(prev) + (1.0 - alpha) * ul(e);
            const double uir = alpha * ur(e) + (1.0 - alpha) * ul(next);

            const double quad_term = J * (uq.row(e).array() * dq.row(e).array()).matrix().dot(quad.weight_vector());
            const double transfer = c * (0.5 * (2.0 * uil - ul(e)) * ul(e) - 0.5 * (2.0 * uir - ur(e)) * ur(e));
            const Eigen::VectorXd modal = ops.V_inv * s.u.row(e).transpose();
            const double il = correction_udu_integral(s.cp.hl, modal);
            const double ir = correction_udu_integral(s.cp.hr, modal);
            const double corr = c * ((uil - ul(e)) * il + (uir - ur(e)) * ir);

            const auto se = static_cast<std::size_t>(e);
            r.element_quadrature[se] = quad_term;
            r.element_boundary_transfer[se] = transfer;
            r.element_correction_terms[se] = corr;
            r.quadrature += quad_term;
            r.boundary_transfer += transfer;
            r.correction_terms += corr;
        }
        return r;
    }

    double advected_sine(double x, double t, double c, double nu, double length)
    {
        const double k = 2.0 * std::numbers::pi / length;
        return std::exp(-nu * k * k * t) * std::sin(k * (x - c * t));
    }

    double log_log_slope(const std::vector<double>& x, const std::vector<double>& y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw InvalidArgument("slope fit needs at least two paired samples");
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const auto n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            if (!(x[i] > 0.0) || !(y[i] > 0.0))
                throw InvalidArgument("slope fit needs positive samples");
            const double lx = std::log(x[i]), ly = std::log(y[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double den = n * sxx - sx * sx;
        if (den == 0.0)
            throw InvalidArgument("slope fit needs distinct abscissae");
        return (n * sxy - sx * sy) / den;
    }

    ConvergenceResult convergence_study(const SchemeConfig& cfg, const CorrectionPair& cp,
                                        const std::vector<int>& meshes, const ConvergenceOptions& opts)
    {
        if (meshes.size() < 2)
            throw InvalidArgument("a convergence study needs at least two meshes");
        if (!(opts.final_time > 0.0) || !(opts.cfl_fraction > 0.0))
            throw InvalidArgument("final time and CFL fraction must be positive");
        const double length = opts.x_right - opts.x_left;
        const double exponent = std::max(1.0, (cfg.p() + 1) / 4.0);
        const double h0 = length / *std::min_element(meshes.begin(), meshes.end());

        ConvergenceResult res;
        for (int ne : meshes)
        {
            const Mesh1D mesh{ne, opts.x_left, opts.x_right};
            const Solver1D solver(mesh, cfg, cp);
            const SchemeConfig& sc = solver.config();
            const double rate = 2.0 * std::abs(sc.c) / sc.h + 4.0 * sc.nu / (sc.h * sc.h);
            const double tau_hat = cfl_limit(sc, cp);
            if (!(tau_hat > 0.0))
                throw InvalidArgument("scheme has no stable time step on a mesh of " + std::to_string(ne) +
                                      " elements");
            double tau = opts.cfl_fraction * tau_hat / rate;
            if (opts.refine_time_step)
                tau *= std::pow(sc.h / h0, exponent - 1.0);
            const auto steps = static_cast<long>(std::ceil(opts.final_time / tau - 1e-9));
            tau = opts.final_time / static_cast<double>(steps);

            const auto exact = [&](double xv, double t) { return advected_sine(xv - opts.x_left, t, sc.c, sc.nu, length); };
            SolverState s = solver.project([&](double xv) { return exact(xv, 0.0); });
            for (long n = 0; n < steps; ++n)
                solver.rk44_step(s, tau);
            s.t = opts.final_time;

            res.n_elem.push_back(ne);
            res.h.push_back(sc.h);
            res.tau.push_back(tau);
            res.errors.push_back(solver.l2_error(s, exact));
        }
        res.order = log_log_slope(res.h, res.errors);
        return res;
    }
} // namespace frlab

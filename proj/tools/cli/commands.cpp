#include "commands.hpp"

#include "records.hpp"

#include "frlab/corrections.hpp"
#include "frlab/error.hpp"
#include "frlab/solver1d.hpp"
#include "frlab/vonneumann.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>

namespace fs = std::filesystem;

namespace frlab::cli
{
    namespace
    {
        const std::vector<std::string> subcommands{"gen-correction", "dispersion", "cfl-map", "solve"};

        struct Common
        {
            std::string out = ".";
            std::string config;
            int jobs = 1;
            std::uint64_t seed = 0;
        };

        struct CorrectionArgs
        {
            std::string family;
            int p = -1;
            std::string q;
            double iota = 0.0;
            std::string k_file;
            std::string correction_file;
        };

        struct SchemeArgs
        {
            std::string nodes = "gauss";
            double alpha = 1.0;
            double c = 1.0;
            double nu = 0.0;
        };

        std::vector<double> parse_list(const std::string& text, const std::string& what)
        {
            std::vector<double> values;
            std::size_t pos = 0;
            while (pos < text.size())
            {
                std::size_t end = text.find(',', pos);
                if (end == std::string::npos)
                    end = text.size();
                std::string item = text.substr(pos, end - pos);
                item.erase(0, item.find_first_not_of(" \t"));
                item.erase(item.find_last_not_of(" \t") + 1);
                double v = 0.0;
                const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
                if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
                    throw InvalidArgument("cannot parse '" + item + "' in " + what);
                values.push_back(v);
                pos = end + 1;
            }
            return values;
        }

        std::pair<double, double> parse_range(const std::string& text, const std::string& what)
        {
            const auto v = parse_list(text, what);
            if (v.size() != 2 || !(v[0] <= v[1]) || !std::isfinite(v[0]) || !std::isfinite(v[1]))
                throw InvalidArgument(what + " must be 'lo,hi' with lo <= hi");
            return {v[0], v[1]};
        }

        std::vector<int> parse_int_list(const std::string& text, const std::string& what)
        {
            std::vector<int> out;
            for (double v : parse_list(text, what))
            {
                if (v != std::floor(v) || v < 1 || v > std::numeric_limits<int>::max())
                    throw InvalidArgument(what + " entries must be positive integers");
                out.push_back(static_cast<int>(v));
            }
            return out;
        }

        void add_common(CLI::App* sub, Common& common)
        {
            sub->add_option("--out", common.out, "Output directory")->capture_default_str();
            sub->add_option("--config", common.config, "JSON file of flag defaults");
            sub->add_option("--jobs", common.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();
            sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
        }

        void add_correction(CLI::App* sub, CorrectionArgs& a)
        {
            sub->add_option("--family", a.family, "glsfr, osfr, esfr or dg");
            sub->add_option("-p,--order", a.p, "Polynomial order");
            sub->add_option("-q", a.q, "GLSFR free coefficients, comma separated");
            sub->add_option("--iota", a.iota, "OSFR parameter")->capture_default_str();
            sub->add_option("--k-file", a.k_file, "ESFR K matrix as JSON {\"K\": [[...]]}");
            sub->add_option("--correction", a.correction_file, "Correction record written by gen-correction");
        }

        void add_scheme(CLI::App* sub, SchemeArgs& s)
        {
            sub->add_option("--nodes", s.nodes, "Solution points: gauss or lobatto")->capture_default_str();
            sub->add_option("--alpha", s.alpha, "Advection upwinding ratio in [0.5, 1]")->capture_default_str();
            sub->add_option("-c,--speed", s.c, "Advection speed")->capture_default_str();
            sub->add_option("--nu", s.nu, "Diffusion coefficient")->capture_default_str();
        }

        CorrectionPair build_correction(const CorrectionArgs& a)
        {
            if (!a.correction_file.empty())
                return correction_from_record(read_json(a.correction_file));
            if (a.family.empty())
                throw InvalidArgument("give --family or --correction");
            if (a.family == "esfr")
            {
                const auto j = read_json(a.k_file.empty() ? throw InvalidArgument("esfr needs --k-file") : a.k_file);
                std::vector<std::vector<double>> rows;
                try
                {
                    rows = j.at("K").get<std::vector<std::vector<double>>>();
                }
                catch (const nlohmann::json::exception& e)
                {
                    throw InvalidArgument(std::string("malformed K file: ") + e.what());
                }
                const auto n = static_cast<int>(rows.size());
                if (n < 1)
                    throw InvalidArgument("K matrix is empty");
                if (a.p >= 0 && a.p != n - 1)
                    throw InvalidArgument("K matrix size does not match -p");
                Eigen::MatrixXd K(n, n);
                for (int i = 0; i < n; ++i)
                {
                    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
                        throw InvalidArgument("K matrix must be square");
                    for (int k = 0; k < n; ++k)
                        K(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                }
                const OperatorSet ops = build_operators(gauss_legendre_points(n));
                const EsfrK ek{n - 1, K};
                validate_esfr_k(ek, ops);
                return esfr_from_K(ek, ops);
            }
            if (a.p < 0)
                throw InvalidArgument("give the polynomial order with -p");
            if (a.family == "glsfr")
                return glsfr_from_params({a.p, a.q.empty() ? std::vector<double>{} : parse_list(a.q, "-q")});
            if (a.family == "osfr")
                return osfr(a.p, a.iota);
            if (a.family == "dg")
                return nodal_dg(a.p);
            throw InvalidArgument("unknown family '" + a.family + "'");
        }

        SchemeConfig build_scheme(const SchemeArgs& s, int p)
        {
            SchemeConfig cfg{s.nodes == "gauss"     ? gauss_legendre_points(p + 1)
                             : s.nodes == "lobatto" ? gauss_lobatto_points(p + 1)
                                                    : throw InvalidArgument("--nodes must be gauss or lobatto")};
            cfg.alpha_a = s.alpha;
            cfg.c = s.c;
            cfg.nu = s.nu;
            cfg.validate();
            return cfg;
        }

        fs::path prepare_output(const Common& common)
        {
            const fs::path dir(common.out);
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec)
                throw InvalidArgument("cannot create output directory '" + dir.string() + "'");
            return dir;
        }

        std::ofstream open_csv(const fs::path& path)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw Error("cannot write '" + path.string() + "'");
            return out;
        }

        // --- gen-correction -------------------------------------------------

        struct GenArgs
        {
            Common common;
            CorrectionArgs corr;
            std::string name = "correction";
        };

        int cmd_gen_correction(const GenArgs& a, std::ostream& out)
        {
            const CorrectionPair cp = build_correction(a.corr);
            check_boundary_conditions(cp);
            const ValidationReport report = validate_lebesgue(cp, {}, a.common.seed);
            const fs::path dir = prepare_output(a.common);

            nlohmann::json record = correction_record(cp);
            record["unique_member"] = cp.unique_member;
            record["validation"] = to_json(report);
            write_json(dir / (a.name + ".json"), record);

            auto csv = open_csv(dir / (a.name + "_curve.csv"));
            CsvWriter w(csv, {"xi", "h_l", "h_r"});
            for (int i = 0; i <= 200; ++i)
            {
                const double xi = i == 200 ? 1.0 : -1.0 + 2.0 * i / 200.0;
                const CorrectionValues v = eval_correction(cp, xi);
                w.cell(xi).cell(v.hl).cell(v.hr);
                w.end_row();
            }
            out << "wrote " << (dir / (a.name + ".json")).string() << " (" << to_string(cp.family) << ", p = " << cp.p
                << ", lebesgue_stable = " << (report.lebesgue_stable ? "true" : "false") << ")\n";
            return exit_ok;
        }

        // --- dispersion -----------------------------------------------------

        struct DispersionArgs
        {
            Common common;
            CorrectionArgs corr;
            SchemeArgs scheme;
            std::string mode = "semi-advection";
            double tau = 0.1;
            int rk_order = 4;
            int n_k = 256;
            std::string name = "dispersion";
        };

        int cmd_dispersion(const DispersionArgs& a, std::ostream& out)
        {
            const CorrectionPair cp = build_correction(a.corr);
            const SchemeConfig cfg = build_scheme(a.scheme, cp.p);
            SweepOptions opts;
            if (a.mode == "semi-advection")
                opts.kind = SweepKind::semi_advection;
            else if (a.mode == "semi-diffusion")
                opts.kind = SweepKind::semi_diffusion;
            else if (a.mode == "full")
                opts.kind = SweepKind::fully_discrete;
            else
                throw InvalidArgument("--mode must be semi-advection, semi-diffusion or full");
            if (a.n_k < 1)
                throw InvalidArgument("--n-k must be positive");
            opts.n_k = a.n_k;
            opts.tau = a.tau;
            opts.order = stability_order(a.rk_order);
            const bool full = opts.kind == SweepKind::fully_discrete;
            if (full && !(a.tau > 0.0))
                throw InvalidArgument("--tau must be positive");

            const std::vector<SpectralSample> sweep = dispersion_sweep(cfg, cp, opts);
            const fs::path dir = prepare_output(a.common);
            auto csv = open_csv(dir / (a.name + ".csv"));
            std::vector<std::string> header{"k_hat", "mode_index", "re", "im", "is_physical"};
            if (full)
            {
                header.emplace_back("c_real");
                header.emplace_back("c_imag");
            }
            CsvWriter w(csv, header);
            double worst = 0.0;
            double growth = -std::numeric_limits<double>::infinity();
            for (const SpectralSample& s : sweep)
            {
                for (Eigen::Index m = 0; m < s.mode_values.size(); ++m)
                {
                    const cplx v = s.mode_values(m);
                    w.cell(s.k_hat).cell(static_cast<int>(m)).cell(v.real()).cell(v.imag());
                    w.cell(static_cast<int>(m == s.physical_index ? 1 : 0));
                    if (full)
                    {
                        const cplx cv = v / s.k_hat;
                        w.cell(cv.real()).cell(cv.imag());
                    }
                    w.end_row();
                    if (full)
                        worst = std::max(worst, std::abs(s.eigenvalues(m)));
                    else if (opts.kind == SweepKind::semi_advection)
                        growth = std::max(growth, s.eigenvalues(m).real());
                }
            }

            nlohmann::json summary{{"mode", a.mode}, {"n_k", a.n_k}, {"p", cp.p}, {"alpha", cfg.alpha_a}};
            if (full)
            {
                summary["tau"] = a.tau;
                summary["rk_order"] = a.rk_order;
                summary["max_abs_lambda"] = worst;
                summary["stable"] = worst <= 1.0 + 1e-10;
            }
            else if (opts.kind == SweepKind::semi_advection)
            {
                summary["max_growth_rate"] = growth;
            }
            write_json(dir / (a.name + "_summary.json"), summary);
            out << "wrote " << (dir / (a.name + ".csv")).string() << " (" << sweep.size() << " wavenumbers)\n";
            return exit_ok;
        }

        // --- cfl-map --------------------------------------------------------

        struct CflArgs
        {
            Common common;
            SchemeArgs scheme;
            int p = 4;
            std::string h0_range = "-1,1";
            std::string h1_range = "-1,1";
            int n_h0 = 21;
            int n_h1 = 21;
            int rk_order = 4;
            int k_samples = 256;
            double tolerance = 1e-4;
            std::string name = "cfl_map";
        };

        int cmd_cfl_map(const CflArgs& a, std::ostream& out)
        {
            if (a.p != 3 && a.p != 4)
                throw InvalidArgument("cfl-map supports -p 3 or -p 4");
            if (a.n_h0 < 1 || a.n_h1 < 1 || a.k_samples < 1)
                throw InvalidArgument("map resolution and wavenumber count must be positive");
            if (!(a.tolerance > 0.0))
                throw InvalidArgument("--tolerance must be positive");
            const SchemeConfig cfg = build_scheme(a.scheme, a.p);
            CflMapRequest req;
            std::tie(req.h0_lo, req.h0_hi) = parse_range(a.h0_range, "--h0-range");
            std::tie(req.h1_lo, req.h1_hi) = parse_range(a.h1_range, "--h1-range");
            req.n_h0 = a.n_h0;
            req.n_h1 = a.n_h1;
            req.order = stability_order(a.rk_order);
            req.k_samples = a.k_samples;
            req.jobs = a.common.jobs;
            req.search.tolerance = a.tolerance;

            const CflMap map = cfl_map(cfg, req);
            const fs::path dir = prepare_output(a.common);
            auto csv = open_csv(dir / (a.name + ".csv"));
            std::vector<std::string> header{a.p == 4 ? "h0\\h1" : "h0"};
            if (a.p == 4)
                for (double v : map.h1)
                    header.push_back(format_double(v));
            else
                header.emplace_back("tau_hat");
            CsvWriter w(csv, header);
            for (std::size_t r = 0; r < map.h0.size(); ++r)
            {
                w.cell(map.h0[r]);
                for (Eigen::Index c = 0; c < map.tau_hat.cols(); ++c)
                    w.cell(map.tau_hat(static_cast<Eigen::Index>(r), c));
                w.end_row();
            }
            out << "wrote " << (dir / (a.name + ".csv")).string() << " (" << map.tau_hat.rows() << "x"
                << map.tau_hat.cols() << ", max tau_hat = " << format_double(map.tau_hat.maxCoeff()) << ")\n";
            return exit_ok;
        }

        // --- solve ----------------------------------------------------------

        struct SolveArgs
        {
            Common common;
            CorrectionArgs corr;
            SchemeArgs scheme;
            int n_elem = 16;
            double x_left = 0.0;
            double x_right = 1.0;
            double tau = 0.0;
            double cfl_fraction = 0.5;
            double t_final = 1.0;
            long steps = 0;
            std::string initial = "sine";
            long history_every = 1;
            std::string refine;
            std::string name = "solve";
        };

        int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err)
        {
            const CorrectionPair cp = build_correction(a.corr);
            const SchemeConfig base = build_scheme(a.scheme, cp.p);
            const Mesh1D mesh{a.n_elem, a.x_left, a.x_right};
            const Solver1D solver(mesh, base, cp);
            const SchemeConfig& cfg = solver.config();
            if (a.initial != "sine" && a.initial != "offset-sine")
                throw InvalidArgument("--initial must be sine or offset-sine");
            if (a.history_every < 1 || a.steps < 0)
                throw InvalidArgument("--history-every must be positive and --steps non-negative");
            if (!(a.cfl_fraction > 0.0))
                throw InvalidArgument("--cfl-fraction must be positive");

            const double rate = 2.0 * std::abs(cfg.c) / cfg.h + 4.0 * cfg.nu / (cfg.h * cfg.h);
            double tau = a.tau;
            if (!(tau > 0.0))
            {
                if (!(rate > 0.0))
                    throw InvalidArgument("c = nu = 0: give --tau explicitly");
                const double tau_hat = cfl_limit(cfg, cp);
                if (!(tau_hat > 0.0))
                    throw InvalidArgument("scheme has no stable time step; give --tau explicitly");
                tau = a.cfl_fraction * tau_hat / rate;
            }
            long steps = a.steps;
            if (steps == 0)
            {
                if (!(a.t_final > 0.0))
                    throw InvalidArgument("--t-final must be positive");
                steps = static_cast<long>(std::ceil(a.t_final / tau - 1e-9));
                tau = a.t_final / static_cast<double>(steps);
            }

            const double length = mesh.length();
            const double offset = a.initial == "offset-sine" ? 1.0 : 0.0;
            const double amplitude = a.initial == "offset-sine" ? 0.5 : 1.0;
            const auto exact = [&](double x, double t) {
                return offset + amplitude * advected_sine(x - mesh.x_left, t, cfg.c, cfg.nu, length);
            };

            const fs::path dir = prepare_output(a.common);
            auto csv = open_csv(dir / (a.name + "_history.csv"));
            CsvWriter w(csv, {"step", "t", "energy", "mass", "l2_error"});

            SolverState s = solver.project([&](double x) { return exact(x, 0.0); });
            const double e0 = solver.energy(s.u);
            const double m0 = solver.total_mass(s.u);
            double e_prev = e0;
            double min_rate = std::numeric_limits<double>::infinity();
            double max_rate = -std::numeric_limits<double>::infinity();
            double max_rel_increase = -std::numeric_limits<double>::infinity();
            double mass_drift = 0.0;
            const auto record = [&](long step, double e, double m) {
                w.cell(step).cell(s.t).cell(e).cell(m).cell(solver.l2_error(s, exact));
                w.end_row();
            };
            record(0, e0, m0);

            std::optional<long> diverged;
            for (long n = 1; n <= steps; ++n)
            {
                solver.rk44_step(s, tau);
                if (a.steps == 0 && n == steps)
                    s.t = a.t_final;
                const double e = solver.energy(s.u);
                const double m = solver.total_mass(s.u);
                if (!s.u.allFinite() || !std::isfinite(e) || e > 1e12 * std::max(e0, 1e-300))
                {
                    diverged = n;
                    break;
                }
                min_rate = std::min(min_rate, (e - e_prev) / tau);
                max_rate = std::max(max_rate, (e - e_prev) / tau);
                if (e_prev > 0.0)
                    max_rel_increase = std::max(max_rel_increase, (e - e_prev) / e_prev);
                mass_drift = std::max(mass_drift, std::abs(m - m0));
                e_prev = e;
                if (n % a.history_every == 0 || n == steps)
                    record(n, e, m);
            }

            nlohmann::json summary{
                {"p", cp.p},
                {"family_tag", std::string(to_string(cp.family))},
                {"n_elem", mesh.n_elem},
                {"alpha", cfg.alpha_a},
                {"c", cfg.c},
                {"nu", cfg.nu},
                {"tau", tau},
                {"tau_hat", tau * rate},
                {"steps", steps},
                {"energy_initial", e0},
                {"mass_initial", m0},
            };
            if (diverged)
            {
                summary["diverged_at_step"] = *diverged;
                write_json(dir / (a.name + "_summary.json"), summary);
                csv.flush();
                err << "error: solution diverged at step " << *diverged << " (t = " << format_double(s.t) << ")\n";
                return exit_divergence;
            }
            summary["t_final"] = s.t;
            summary["energy_final"] = e_prev;
            summary["energy_relative_change"] = e0 > 0.0 ? (e_prev - e0) / e0 : 0.0;
            summary["min_energy_rate"] = steps > 0 ? min_rate : 0.0;
            summary["max_energy_rate"] = steps > 0 ? max_rate : 0.0;
            summary["max_step_energy_increase_relative"] = steps > 0 ? max_rel_increase : 0.0;
            summary["mass_drift"] = mass_drift;
            if (std::abs(m0) > 1e-12)
                summary["relative_mass_drift"] = mass_drift / std::abs(m0);
            summary["l2_error_final"] = solver.l2_error(s, exact);
            if (!a.refine.empty())
            {
                ConvergenceOptions copts;
                copts.final_time = a.t_final;
                copts.cfl_fraction = a.cfl_fraction;
                copts.x_left = a.x_left;
                copts.x_right = a.x_right;
                const ConvergenceResult conv = convergence_study(base, cp, parse_int_list(a.refine, "--refine"), copts);
                summary["refinement"] = {{"n_elem", conv.n_elem}, {"errors", conv.errors}, {"tau", conv.tau}};
                summary["observed_order"] = conv.order;
            }
            write_json(dir / (a.name + "_summary.json"), summary);
            out << "wrote " << (dir / (a.name + "_history.csv")).string() << " (" << steps << " steps, tau = "
                << format_double(tau) << ")\n";
            return exit_ok;
        }

        // --- config handling ------------------------------------------------

        std::string json_scalar(const nlohmann::json& v)
        {
            if (v.is_string())
                return v.get<std::string>();
            if (v.is_number_float())
                return format_double(v.get<double>());
            if (v.is_boolean())
                return v.get<bool>() ? "true" : "false";
            return v.dump();
        }

        // Expands --config into flag tokens placed right after the subcommand so
        // that later command-line occurrences override them.
        std::vector<std::string> expand_config(const std::vector<std::string>& args)
        {
            auto sub = std::find_first_of(args.begin(), args.end(), subcommands.begin(), subcommands.end());
            if (sub == args.end())
                return args;
            std::string path;
            for (auto it = sub + 1; it != args.end(); ++it)
            {
                if (*it == "--config" && it + 1 != args.end())
                    path = *(it + 1);
                else if (it->rfind("--config=", 0) == 0)
                    path = it->substr(9);
            }
            if (path.empty())
                return args;
            const nlohmann::json cfg = read_json(path);
            if (!cfg.is_object())
                throw InvalidArgument("config file must hold a JSON object");
            std::vector<std::string> extra;
            for (const auto& [key, value] : cfg.items())
            {
                if (key == "config")
                    continue;
                std::string flag = key;
                std::replace(flag.begin(), flag.end(), '_', '-');
                flag = (flag.size() == 1 ? "-" : "--") + flag;
                if (value.is_array())
                {
                    std::string joined;
                    for (const auto& item : value)
                        joined += (joined.empty() ? "" : ",") + json_scalar(item);
                    extra.push_back(flag);
                    extra.push_back(joined);
                }
                else if (value.is_null())
                {
                    throw InvalidArgument("config key '" + key + "' is null");
                }
                else
                {
                    extra.push_back(flag);
                    extra.push_back(json_scalar(value));
                }
            }
            std::vector<std::string> out(args.begin(), sub + 1);
            out.insert(out.end(), extra.begin(), extra.end());
            out.insert(out.end(), sub + 1, args.end());
            return out;
        }

        void take_last(CLI::App* app)
        {
            for (CLI::Option* opt : app->get_options())
                opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    } // namespace

    int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
    {
        CLI::App app{"Flux reconstruction correction-function laboratory", "frlab"};
        app.require_subcommand(1);

        GenArgs gen;
        auto* gen_cmd = app.add_subcommand("gen-correction", "Build a correction pair and validate it");
        add_common(gen_cmd, gen.common);
        add_correction(gen_cmd, gen.corr);
        gen_cmd->add_option("--name", gen.name, "Output file stem")->capture_default_str();

        DispersionArgs disp;
        auto* disp_cmd = app.add_subcommand("dispersion", "Von Neumann dispersion and dissipation sweep");
        add_common(disp_cmd, disp.common);
        add_correction(disp_cmd, disp.corr);
        add_scheme(disp_cmd, disp.scheme);
        disp_cmd->add_option("--mode", disp.mode, "semi-advection, semi-diffusion or full")->capture_default_str();
        disp_cmd->add_option("--tau", disp.tau, "Time step of the fully discrete analysis")->capture_default_str();
        disp_cmd->add_option("--rk-order", disp.rk_order, "Stability polynomial order (3 or 4)")->capture_default_str();
        disp_cmd->add_option("--n-k", disp.n_k, "Number of wavenumbers")->capture_default_str();
        disp_cmd->add_option("--name", disp.name, "Output file stem")->capture_default_str();

        CflArgs cfl;
        auto* cfl_cmd = app.add_subcommand("cfl-map", "CFL limits over the GLSFR free parameters");
        add_common(cfl_cmd, cfl.common);
        add_scheme(cfl_cmd, cfl.scheme);
        cfl_cmd->add_option("-p,--order", cfl.p, "Polynomial order (3 or 4)")->capture_default_str();
        cfl_cmd->add_option("--h0-range", cfl.h0_range, "lo,hi of the first coefficient")->capture_default_str();
        cfl_cmd->add_option("--h1-range", cfl.h1_range, "lo,hi of the second coefficient")->capture_default_str();
        cfl_cmd->add_option("--n-h0", cfl.n_h0, "Samples of the first coefficient")->capture_default_str();
        cfl_cmd->add_option("--n-h1", cfl.n_h1, "Samples of the second coefficient")->capture_default_str();
        cfl_cmd->add_option("--rk-order", cfl.rk_order, "Stability polynomial order (3 or 4)")->capture_default_str();
        cfl_cmd->add_option("--k-samples", cfl.k_samples, "Wavenumbers per stability test")->capture_default_str();
        cfl_cmd->add_option("--tolerance", cfl.tolerance, "Bisection tolerance on tau_hat")->capture_default_str();
        cfl_cmd->add_option("--name", cfl.name, "Output file stem")->capture_default_str();

        SolveArgs solve;
        auto* solve_cmd = app.add_subcommand("solve", "Run the periodic 1D solver");
        add_common(solve_cmd, solve.common);
        add_correction(solve_cmd, solve.corr);
        add_scheme(solve_cmd, solve.scheme);
        solve_cmd->add_option("--n-elem", solve.n_elem, "Number of elements")->capture_default_str();
        solve_cmd->add_option("--x-left", solve.x_left, "Left domain bound")->capture_default_str();
        solve_cmd->add_option("--x-right", solve.x_right, "Right domain bound")->capture_default_str();
        solve_cmd->add_option("--tau", solve.tau, "Time step (default: --cfl-fraction of the CFL limit)");
        solve_cmd->add_option("--cfl-fraction", solve.cfl_fraction, "Fraction of the CFL limit")->capture_default_str();
        solve_cmd->add_option("--t-final", solve.t_final, "Final time")->capture_default_str();
        solve_cmd->add_option("--steps", solve.steps, "Fixed number of steps (overrides --t-final)");
        solve_cmd->add_option("--initial", solve.initial, "sine or offset-sine")->capture_default_str();
        solve_cmd->add_option("--history-every", solve.history_every, "History stride in steps")->capture_default_str();
        solve_cmd->add_option("--refine", solve.refine, "Mesh sequence for an order study, e.g. 8,16,32");
        solve_cmd->add_option("--name", solve.name, "Output file stem")->capture_default_str();

        for (CLI::App* sub : {gen_cmd, disp_cmd, cfl_cmd, solve_cmd})
            take_last(sub);

        try
        {
            std::vector<std::string> argv = expand_config(args);
            std::reverse(argv.begin(), argv.end());
            app.parse(argv);
        }
        catch (const CLI::ParseError& e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? exit_ok : exit_validation;
        }
        catch (const Error& e)
        {
            err << "error: " << e.what() << '\n';
            return exit_validation;
        }

        try
        {
            if (gen_cmd->parsed())
                return cmd_gen_correction(gen, out);
            if (disp_cmd->parsed())
                return cmd_dispersion(disp, out);
            if (cfl_cmd->parsed())
                return cmd_cfl_map(cfl, out);
            return cmd_solve(solve, out, err);
        }
        catch (const ConditionViolation& e)
        {
            err << "error: condition '" << e.condition() << "' violated: " << e.what() << '\n';
        }
        catch (const BoundaryClosureError& e)
        {
            err << "error: boundary condition violated: " << e.what() << '\n';
        }
        catch (const Error& e)
        {
            err << "error: " << e.what() << '\n';
        }
        return exit_validation;
    }
} // namespace frlab::cli

#include "commands.hpp"
#include "records.hpp"

#include "frlab/corrections.hpp"
#include "frlab/vonneumann.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Catch::Approx;
using nlohmann::json;

namespace
{
    struct TempDir
    {
        fs::path path;

        TempDir()
        {
            std::random_device rd;
            path = fs::temp_directory_path() / ("frlab_cli_" + std::to_string(rd()) + std::to_string(rd()));
            fs::create_directories(path);
        }
        ~TempDir()
        {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
        std::string str() const { return path.string(); }
    };

    struct Run
    {
        int code = 0;
        std::string out;
        std::string err;
    };

    Run run(std::vector<std::string> args)
    {
        std::ostringstream out, err;
        Run r;
        r.code = frlab::cli::run(args, out, err);
        r.out = out.str();
        r.err = err.str();
        return r;
    }

    std::string slurp(const fs::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        REQUIRE(in);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    json load(const fs::path& p) { return json::parse(slurp(p)); }

    std::vector<std::vector<std::string>> csv(const fs::path& p)
    {
        std::vector<std::vector<std::string>> rows;
        std::istringstream in(slurp(p));
        std::string line;
        while (std::getline(in, line))
        {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ','))
                cells.push_back(cell);
            rows.push_back(cells);
        }
        return rows;
    }
} // namespace

TEST_CASE("shortest round-trip number formatting", "[cli]")
{
    using frlab::cli::format_double;
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-17) == "-2.5e-17");
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i)
    {
        const double x = u(rng) * std::pow(10.0, i % 20 - 10);
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("CSV writer enforces the header width", "[cli]")
{
    std::ostringstream os;
    frlab::cli::CsvWriter w(os, {"a", "b"});
    w.cell(1.5).cell(2);
    w.end_row();
    CHECK(os.str() == "a,b\n1.5,2\n");
    w.cell(1.0);
    CHECK_THROWS(w.end_row());
}

TEST_CASE("gen-correction writes the GLSFR closure record", "[cli]")
{
    TempDir dir;
    const Run r = run({"gen-correction", "--family", "glsfr", "-p", "4", "-q", "0.522943203125,0.14142135623730951",
                       "--out", dir.str()});
    REQUIRE(r.code == 0);
    const json rec = load(dir.path / "correction.json");
    CHECK(rec["p"] == 4);
    CHECK(rec["family_tag"] == "glsfr");
    const auto hl = rec["hl_coeffs"].get<std::vector<double>>();
    REQUIRE(hl.size() == 6);
    const frlab::CorrectionPair ref = frlab::glsfr_from_params({4, {0.522943203125, 0.14142135623730951}});
    for (std::size_t i = 0; i < hl.size(); ++i)
        CHECK(hl[i] == ref.hl(static_cast<Eigen::Index>(i)));
    CHECK(hl[2] == Approx(-0.522943203125).margin(1e-15));
    CHECK(hl[3] == Approx(-0.14142135623730951).margin(1e-15));
    CHECK(hl[4] == 0.5);
    CHECK(hl[5] == -0.5);
    CHECK(rec["validation"]["parity_ok"] == true);
    CHECK(rec["validation"]["boundary_ok"] == true);

    const auto rows = csv(dir.path / "correction_curve.csv");
    REQUIRE(rows.size() == 202);
    CHECK(rows[0] == std::vector<std::string>{"xi", "h_l", "h_r"});
    CHECK(std::stod(rows[1][0]) == -1.0);
    CHECK(std::stod(rows[1][1]) == Approx(1.0).margin(1e-12));
    CHECK(std::stod(rows[201][0]) == 1.0);
    CHECK(std::stod(rows[201][2]) == Approx(1.0).margin(1e-12));
}

TEST_CASE("gen-correction with osfr iota = 0 is the DG record", "[cli]")
{
    TempDir dir;
    REQUIRE(run({"gen-correction", "--family", "osfr", "-p", "4", "--iota", "0", "--out", dir.str()}).code == 0);
    const auto hl = load(dir.path / "correction.json")["hl_coeffs"].get<std::vector<double>>();
    const frlab::CorrectionPair dg = frlab::nodal_dg(4);
    for (std::size_t i = 0; i < hl.size(); ++i)
        CHECK(hl[i] == Approx(dg.hl(static_cast<Eigen::Index>(i))).margin(1e-12));
}

TEST_CASE("gen-correction rejects invalid input with exit code 2", "[cli]")
{
    TempDir dir;
    const Run low = run({"gen-correction", "--family", "glsfr", "-p", "1", "--out", dir.str()});
    CHECK(low.code == 2);
    CHECK_FALSE(low.err.empty());
    CHECK_FALSE(fs::exists(dir.path / "correction.json"));

    CHECK(run({"gen-correction", "--family", "glsfr", "-p", "4", "-q", "0.1", "--out", dir.str()}).code == 2);
    CHECK(run({"gen-correction", "--family", "nonsense", "-p", "4", "--out", dir.str()}).code == 2);
    CHECK(run({"bogus-command"}).code == 2);
    CHECK(run({"gen-correction", "--help"}).code == 0);

    std::ofstream(dir.path / "k.json") << R"({"K": [[0, 0, 0], [0, 0, 0], [0, 0, -1]]})";
    const Run bad_k = run({"gen-correction", "--family", "esfr", "-p", "2", "--k-file", (dir.path / "k.json").string(),
                           "--out", dir.str()});
    CHECK(bad_k.code == 2);
    CHECK(bad_k.err.find("positive_definite") != std::string::npos);
}

TEST_CASE("gen-correction record round-trips exactly", "[cli]")
{
    TempDir dir;
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int p = 2; p <= 6; ++p)
    {
        std::string q;
        for (int i = 0; i < p - 2; ++i)
            q += (i ? "," : "") + frlab::cli::format_double(u(rng));
        std::vector<std::string> args{"gen-correction", "--family", "glsfr", "-p", std::to_string(p), "--out", dir.str()};
        if (!q.empty())
        {
            args.push_back("-q");
            args.push_back(q);
        }
        REQUIRE(run(args).code == 0);
        const frlab::CorrectionPair loaded = frlab::cli::correction_from_record(load(dir.path / "correction.json"));
        std::vector<double> qv;
        std::stringstream ss(q);
        std::string tok;
        while (std::getline(ss, tok, ','))
            qv.push_back(std::stod(tok));
        const frlab::CorrectionPair direct = frlab::glsfr_from_params({p, qv});
        CHECK(loaded.p == p);
        CHECK(loaded.family == frlab::Family::glsfr);
        CHECK((loaded.hl.array() == direct.hl.array()).all());
        CHECK((loaded.hr.array() == direct.hr.array()).all());
    }
}

TEST_CASE("outputs are byte-identical for a fixed configuration", "[cli]")
{
    TempDir a, b;
    for (const TempDir* d : {&a, &b})
    {
        REQUIRE(run({"gen-correction", "--family", "osfr", "-p", "3", "--iota", "0.5", "--seed", "7", "--out", d->str()}).code == 0);
        REQUIRE(run({"cfl-map", "-p", "4", "--n-h0", "4", "--n-h1", "3", "--k-samples", "32", "--jobs",
                     d == &a ? "1" : "3", "--out", d->str()}).code == 0);
        REQUIRE(run({"dispersion", "--family", "dg", "-p", "3", "--n-k", "16", "--out", d->str()}).code == 0);
    }
    for (const char* f : {"correction.json", "correction_curve.csv", "cfl_map.csv", "dispersion.csv", "dispersion_summary.json"})
        CHECK(slurp(a.path / f) == slurp(b.path / f));
}

TEST_CASE("config file supplies defaults and flags override it", "[cli]")
{
    TempDir dir;
    std::ofstream(dir.path / "cfg.json") << R"({"family": "glsfr", "order": 3, "q": [0.25], "name": "from_config"})";
    REQUIRE(run({"gen-correction", "--config", (dir.path / "cfg.json").string(), "--out", dir.str()}).code == 0);
    const json a = load(dir.path / "from_config.json");
    CHECK(a["p"] == 3);
    CHECK(a["hl_coeffs"][0] == 0.25);

    REQUIRE(run({"gen-correction", "--config", (dir.path / "cfg.json").string(), "-q", "0.5", "--name", "flagged",
                 "--out", dir.str()}).code == 0);
    const json b = load(dir.path / "flagged.json");
    CHECK(b["p"] == 3);
    CHECK(b["hl_coeffs"][0] == 0.5);

    CHECK(run({"gen-correction", "--config", (dir.path / "missing.json").string(), "--out", dir.str()}).code == 2);
}

TEST_CASE("dispersion command examples", "[cli]")
{
    TempDir dir;
    REQUIRE(run({"dispersion", "--family", "dg", "-p", "4", "--mode", "semi-advection", "--n-k", "64", "--out", dir.str()}).code == 0);
    const auto rows = csv(dir.path / "dispersion.csv");
    REQUIRE(rows[0] == std::vector<std::string>{"k_hat", "mode_index", "re", "im", "is_physical"});
    REQUIRE(rows.size() == 1 + 64 * 5);
    bool found = false;
    for (std::size_t r = 1; r <= 5; ++r)
        if (rows[r][4] == "1")
        {
            found = true;
            CHECK(std::stod(rows[r][2]) / std::stod(rows[r][0]) == Approx(1.0).margin(1e-3));
        }
    CHECK(found);

    REQUIRE(run({"dispersion", "--family", "glsfr", "-p", "4", "-q", "0.3,0.2", "--alpha", "0.5", "--n-k", "32",
                 "--name", "central", "--out", dir.str()}).code == 0);
    const auto central = csv(dir.path / "central.csv");
    CHECK(central.size() == 1 + 32 * 5);
    int physical = 0;
    for (std::size_t r = 1; r < central.size(); ++r)
        physical += central[r][4] == "1";
    CHECK(physical == 32);

    REQUIRE(run({"dispersion", "--family", "glsfr", "-p", "4", "-q", "0.77,-0.52", "--mode", "full", "--tau", "0.1",
                 "--n-k", "128", "--name", "full", "--out", dir.str()}).code == 0);
    const auto full = csv(dir.path / "full.csv");
    CHECK(full[0] == std::vector<std::string>{"k_hat", "mode_index", "re", "im", "is_physical", "c_real", "c_imag"});
    const json summary = load(dir.path / "full_summary.json");
    CHECK(summary["stable"] == true);
    CHECK(summary["max_abs_lambda"].get<double>() <= 1.0 + 1e-10);

    REQUIRE(run({"dispersion", "--family", "dg", "-p", "3", "--mode", "semi-diffusion", "--n-k", "8", "--name", "diff", "--out", dir.str()}).code == 0);
    CHECK(csv(dir.path / "diff.csv").size() == 1 + 8 * 4);

    CHECK(run({"dispersion", "-p", "3", "--out", dir.str()}).code == 2);
    CHECK(run({"dispersion", "--family", "dg", "-p", "3", "--mode", "sideways", "--out", dir.str()}).code == 2);
    CHECK(run({"dispersion", "--family", "dg", "-p", "3", "--alpha", "0.2", "--out", dir.str()}).code == 2);
    CHECK(run({"dispersion", "--family", "dg", "-p", "3", "--n-k", "0", "--out", dir.str()}).code == 2);
}

TEST_CASE("cfl-map command examples", "[cli]")
{
    TempDir dir;
    REQUIRE(run({"cfl-map", "-p", "4", "--h0-range", "-0.2,0.8", "--h1-range", "-0.4,0.6", "--n-h0", "6", "--n-h1", "6",
                 "--k-samples", "64", "--out", dir.str()}).code == 0);
    const auto rows = csv(dir.path / "cfl_map.csv");
    REQUIRE(rows.size() == 7);
    REQUIRE(rows[0].size() == 7);
    CHECK(rows[0][0] == "h0\\h1");
    // Row h0 = 0, column h1 = 0 is nodal DG.
    CHECK(std::stod(rows[2][0]) == Approx(0.0).margin(1e-15));
    CHECK(std::stod(rows[0][6]) == 0.6);
    int c0 = 0;
    for (int c = 1; c <= 6; ++c)
        if (std::abs(std::stod(rows[0][static_cast<std::size_t>(c)])) < 1e-12)
            c0 = c;
    REQUIRE(c0 > 0);
    const double dg = std::stod(rows[2][static_cast<std::size_t>(c0)]);
    CHECK(dg > 0.0);
    CHECK(dg == Approx(frlab::cfl_limit(frlab::scheme_for_order(4), frlab::nodal_dg(4), frlab::StabilityOrder::rk4, 64)).margin(1e-12));

    REQUIRE(run({"cfl-map", "-p", "4", "--h0-range", "0.77,0.97", "--h1-range", "-0.52,-0.32", "--n-h0", "2", "--n-h1", "2",
                 "--k-samples", "64", "--name", "h4", "--out", dir.str()}).code == 0);
    CHECK(std::stod(csv(dir.path / "h4.csv")[1][1]) >= dg);

    REQUIRE(run({"cfl-map", "-p", "3", "--n-h0", "5", "--k-samples", "32", "--name", "p3", "--out", dir.str()}).code == 0);
    const auto p3 = csv(dir.path / "p3.csv");
    CHECK(p3[0] == std::vector<std::string>{"h0", "tau_hat"});
    CHECK(p3.size() == 6);
    for (std::size_t r = 1; r < p3.size(); ++r)
        CHECK(p3[r].size() == 2);

    CHECK(run({"cfl-map", "-p", "5", "--out", dir.str()}).code == 2);
    CHECK(run({"cfl-map", "-p", "4", "--h0-range", "1,-1", "--out", dir.str()}).code == 2);
    CHECK(run({"cfl-map", "-p", "4", "--n-h0", "0", "--out", dir.str()}).code == 2);
}

TEST_CASE("solve command examples", "[cli]")
{
    TempDir dir;
    REQUIRE(run({"solve", "--family", "dg", "-p", "4", "--n-elem", "16", "--initial", "offset-sine", "--out", dir.str()}).code == 0);
    const json up = load(dir.path / "solve_summary.json");
    CHECK(up["relative_mass_drift"].get<double>() < 1e-11);
    CHECK(up["max_step_energy_increase_relative"].get<double>() < 1e-12);
    const auto hist = csv(dir.path / "solve_history.csv");
    CHECK(hist[0] == std::vector<std::string>{"step", "t", "energy", "mass", "l2_error"});
    CHECK(std::stod(hist.back()[1]) == Approx(1.0).epsilon(1e-12));

    REQUIRE(run({"solve", "--family", "dg", "-p", "4", "--n-elem", "16", "--alpha", "0.5", "--name", "central",
                 "--out", dir.str()}).code == 0);
    const json central = load(dir.path / "central_summary.json");
    CHECK(std::abs(central["energy_relative_change"].get<double>()) < 1e-8);
    CHECK(central["mass_drift"].get<double>() < 1e-12);

    REQUIRE(run({"solve", "--family", "dg", "-p", "2", "--refine", "8,16,32", "--t-final", "0.5", "--name", "order",
                 "--out", dir.str()}).code == 0);
    const double order = load(dir.path / "order_summary.json")["observed_order"].get<double>();
    CHECK(order >= 2.5);
    CHECK(order <= 3.5);
}

TEST_CASE("solve reports divergence with exit code 3", "[cli]")
{
    TempDir dir;
    CHECK(frlab::cfl_limit(frlab::scheme_for_order(4), frlab::glsfr_from_params({4, {10.0, 10.0}})) == 0.0);
    const Run r = run({"solve", "--family", "glsfr", "-p", "4", "-q", "10,10", "--n-elem", "16", "--tau", "1e-3",
                       "--t-final", "20", "--out", dir.str()});
    CHECK(r.code == 3);
    CHECK(r.err.find("diverged at step") != std::string::npos);
    const json summary = load(dir.path / "solve_summary.json");
    CHECK(summary["diverged_at_step"].get<long>() > 0);
}

TEST_CASE("solve accepts a correction record file", "[cli]")
{
    TempDir dir;
    REQUIRE(run({"gen-correction", "--family", "glsfr", "-p", "4", "-q", "0.3,0.2", "--name", "pair", "--out", dir.str()}).code == 0);
    REQUIRE(run({"solve", "--correction", (dir.path / "pair.json").string(), "--n-elem", "8", "--steps", "20",
                 "--out", dir.str()}).code == 0);
    const json s = load(dir.path / "solve_summary.json");
    CHECK(s["mass_drift"].get<double>() < 1e-13);
    CHECK(run({"solve", "--correction", (dir.path / "absent.json").string(), "--out", dir.str()}).code == 2);
}

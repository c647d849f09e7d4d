#include "records.hpp"

#include "frlab/error.hpp"

#include <array>
#include <charconv>
#include <fstream>

namespace frlab::cli
{
    std::string format_double(double v)
    {
        std::array<char, 32> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    }

    CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size())
    {
        for (const auto& h : header)
            cell(h);
        end_row();
    }

    void CsvWriter::separator()
    {
        if (filled_ > 0)
            os_ << ',';
        ++filled_;
    }

    CsvWriter& CsvWriter::cell(double v)
    {
        separator();
        os_ << format_double(v);
        return *this;
    }

    CsvWriter& CsvWriter::cell(int v)
    {
        separator();
        os_ << v;
        return *this;
    }

    CsvWriter& CsvWriter::cell(long v)
    {
        separator();
        os_ << v;
        return *this;
    }

    CsvWriter& CsvWriter::cell(const std::string& v)
    {
        separator();
        os_ << v;
        return *this;
    }

    void CsvWriter::end_row()
    {
        if (filled_ != columns_)
            throw InvalidArgument("CSV row has " + std::to_string(filled_) + " cells, header has " +
                                  std::to_string(columns_));
        os_ << '\n';
        filled_ = 0;
    }

    nlohmann::json to_json(const ValidationReport& r)
    {
        return {
            {"even_sum", r.even_sum},
            {"odd_sum", r.odd_sum},
            {"max_abs_il", r.max_abs_il},
            {"max_abs_ir", r.max_abs_ir},
            {"hl_left_residual", r.hl_left_residual},
            {"hl_right_residual", r.hl_right_residual},
            {"hr_left_residual", r.hr_left_residual},
            {"hr_right_residual", r.hr_right_residual},
            {"parity_ok", r.parity_ok},
            {"integrals_ok", r.integrals_ok},
            {"boundary_ok", r.boundary_ok},
            {"lebesgue_stable", r.lebesgue_stable},
        };
    }

    namespace
    {
        std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

        Eigen::VectorXd from_vector(const std::vector<double>& v)
        {
            return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
    } // namespace

    nlohmann::json correction_record(const CorrectionPair& cp)
    {
        return {
            {"p", cp.p},
            {"family_tag", std::string(to_string(cp.family))},
            {"hl_coeffs", to_vector(cp.hl)},
            {"hr_coeffs", to_vector(cp.hr)},
        };
    }

    CorrectionPair correction_from_record(const nlohmann::json& j)
    {
        try
        {
            CorrectionPair cp;
            cp.p = j.at("p").get<int>();
            const auto tag = j.at("family_tag").get<std::string>();
            const auto family = family_from_string(tag);
            if (!family)
                throw InvalidArgument("unknown correction family '" + tag + "'");
            cp.family = *family;
            cp.hl = from_vector(j.at("hl_coeffs").get<std::vector<double>>());
            cp.hr = j.contains("hr_coeffs") ? from_vector(j.at("hr_coeffs").get<std::vector<double>>())
                                            : mirror_coefficients(cp.hl);
            if (cp.p < 0 || cp.hl.size() != cp.p + 2 || cp.hr.size() != cp.p + 2)
                throw InvalidArgument("correction record needs p + 2 coefficients per side");
            cp.unique_member = (cp.family == Family::glsfr && cp.p == 2);
            return cp;
        }
        catch (const nlohmann::json::exception& e)
        {
            throw InvalidArgument(std::string("malformed correction record: ") + e.what());
        }
    }

    nlohmann::json read_json(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
            throw InvalidArgument("cannot open '" + path.string() + "'");
        try
        {
            return nlohmann::json::parse(in);
        }
        catch (const nlohmann::json::exception& e)
        {
            throw InvalidArgument("cannot parse '" + path.string() + "': " + e.what());
        }
    }

    void write_json(const std::filesystem::path& path, const nlohmann::json& j)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error("cannot write '" + path.string() + "'");
        out << j.dump(2) << '\n';
    }
} // namespace frlab::cli

#ifndef FRLAB_CLI_RECORDS_HPP
#define FRLAB_CLI_RECORDS_HPP

#include "frlab/corrections.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace frlab::cli
{
    /// Shortest decimal string that parses back to exactly `v`.
    std::string format_double(double v);

    /// Comma-separated writer with a mandatory header and LF line endings.
    class CsvWriter
    {
    public:
        CsvWriter(std::ostream& os, const std::vector<std::string>& header);

        CsvWriter& cell(double v);
        CsvWriter& cell(int v);
        CsvWriter& cell(long v);
        CsvWriter& cell(const std::string& v);
        void end_row();

    private:
        void separator();

        std::ostream& os_;
        std::size_t columns_;
        std::size_t filled_ = 0;
    };

    nlohmann::json to_json(const ValidationReport& report);

    /// {p, family_tag, hl_coeffs, hr_coeffs[, validation]}.
    nlohmann::json correction_record(const CorrectionPair& cp);
    CorrectionPair correction_from_record(const nlohmann::json& j);

    nlohmann::json read_json(const std::filesystem::path& path);
    void write_json(const std::filesystem::path& path, const nlohmann::json& j);
} // namespace frlab::cli

#endif

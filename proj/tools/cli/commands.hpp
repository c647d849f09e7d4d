#ifndef FRLAB_CLI_COMMANDS_HPP
#define FRLAB_CLI_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace frlab::cli
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_validation = 2,
        exit_divergence = 3,
    };

    /// Runs the frlab command line on `args` (argv without the program name).
    ///
    /// Subcommands: gen-correction, dispersion, cfl-map, solve. A JSON object
    /// passed with --config supplies defaults for the long flags of the chosen
    /// subcommand; flags given on the command line take precedence.
    int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
} // namespace frlab::cli

#endif

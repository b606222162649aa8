#ifndef CARLEMAN_CLI_HPP
#define CARLEMAN_CLI_HPP

namespace carleman {

/// Subcommands: constants | identities | bounds | carleman | sweep | suite.
/// Exit status: 0 all checks pass, 1 a check failed, 2 usage/config error.
int cli_main(int argc, const char* const* argv);

} // namespace carleman

#endif

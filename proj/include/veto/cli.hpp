#ifndef VETO_CLI_HPP
#define VETO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace veto {

inline constexpr const char* kConfigEnvVar = "VETO_BANDIT_CONFIG";

// Runs one `veto_bandit` invocation. args excludes the program name. Returns
// the process exit status; failures print a single JSON line
// {"error": <category>, "message": ...} on `err`.
int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace veto

#endif  // VETO_CLI_HPP

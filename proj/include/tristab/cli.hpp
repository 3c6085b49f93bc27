#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tristab {

/// Exit codes: 0 all gating checks pass, 1 some gating check fails, 2 usage or config error.
int cli_main(int argc, const char* const* argv);
/// Same, with arguments after the program name and explicit streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tristab

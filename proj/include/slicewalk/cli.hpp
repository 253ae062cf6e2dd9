#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slicewalk {

// Exit codes: 0 ok, 1 verification failure or runtime error, 2 usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv);

// Flat key=value file; '#' starts a comment. Throws InvalidArgument with the line number.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace slicewalk

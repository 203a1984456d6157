#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bft::cli {

/// Exit codes: 0 success / inequality holds, 1 violation or tree does not
/// compute the function, 2 usage or parse error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bft::cli

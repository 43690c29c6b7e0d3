#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fpinc {

// Whole CLI behind a callable surface so tests drive it in-process.
// Exit codes: 0 ok, 1 usage, 2 bad data, 3 broken internal invariant.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

} // namespace fpinc

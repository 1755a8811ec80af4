#pragma once

#include <iosfwd>

namespace srw {

// Dispatches the moments / simulate / verify subcommands.
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 numeric or regime error.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

} // namespace srw

#pragma once

namespace claimbias {

// Parses argv and dispatches to one subcommand. Exit codes: 0 success,
// 1 usage error, 2 data error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace claimbias

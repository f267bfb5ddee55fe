#pragma once

namespace trainkit {

// Command-line entry point. Exit codes: 0 success, 1 validation failure
// (violations are printed), 2 usage or input parse errors.
int run(int argc, char** argv);

}  // namespace trainkit

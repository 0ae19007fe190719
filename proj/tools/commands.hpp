#pragma once

namespace trobust::cli {

// Full command-line entry point; returns the process exit code.
//   0  success
//   2  usage, malformed input file, or malformed study spec
//   3  numerical failure while fitting a single dataset
int runCli(int argc, char** argv);

}  // namespace trobust::cli

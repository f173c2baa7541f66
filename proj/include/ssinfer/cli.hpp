#pragma once

namespace ssinfer {

/// Entry point of the command-line tool; returns the process exit status.
int cli_main(int argc, const char* const* argv);

}  // namespace ssinfer

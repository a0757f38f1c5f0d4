#pragma once

namespace ddpf {

// Entry point of the ddpf tool; identical to main() so tests can drive the
// CLI in-process. argv[0] is the program name.
int cli_main(int argc, const char* const* argv);

} // namespace ddpf

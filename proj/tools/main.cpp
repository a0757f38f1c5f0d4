#include "ddpf/cli.hpp"

int main(int argc, char** argv) { return ddpf::cli_main(argc, argv); }

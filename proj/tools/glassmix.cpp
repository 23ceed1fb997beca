#include "glassmix/cli/commands.hpp"

int main(int argc, char** argv) { return glassmix::cli::run_cli(argc, argv); }

#include "stpc/cli/commands.hpp"

int main(int argc, char** argv) { return stpc::cli::run(argc, argv); }

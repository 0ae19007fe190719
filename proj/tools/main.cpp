#include "commands.hpp"

int main(int argc, char** argv) { return trobust::cli::runCli(argc, argv); }

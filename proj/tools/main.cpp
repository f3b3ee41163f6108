#include "ccbounds/cli.hpp"

int main(int argc, char** argv) { return ccbounds::cli::run(argc, argv); }

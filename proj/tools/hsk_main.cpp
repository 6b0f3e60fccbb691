#include "hsk/cli/cli.hpp"

int main(int argc, char** argv) { return hsk::cli::run(argc, argv); }

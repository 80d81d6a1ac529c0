#include "dchne/cli.hpp"

int main(int argc, char** argv) { return dchne::cli::main(argc, argv); }

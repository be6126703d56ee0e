#include "reebfol/cli.hpp"

int main(int argc, char** argv) { return reebfol::cli::main(argc, argv); }

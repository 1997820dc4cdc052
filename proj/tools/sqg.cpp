#include "sqg/cli.hpp"

int main(int argc, char** argv) { return sqg::cli::main(argc, argv); }

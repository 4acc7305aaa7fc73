#include "fairalloc/cli.hpp"

int main(int argc, char** argv) { return fairalloc::cli::main(argc, argv); }

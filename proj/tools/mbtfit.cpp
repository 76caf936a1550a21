#include "mbt/cli.hpp"

int main(int argc, char** argv) { return mbt::cli::main(argc, argv); }

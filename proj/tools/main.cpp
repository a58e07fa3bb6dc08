#include "cli.hpp"

int main(int argc, char** argv) { return nlstrain::cli::main(argc, argv); }

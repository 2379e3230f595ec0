#include "cli.hpp"

int main(int argc, char** argv) { return evshape::cli::cli_main(argc, argv); }

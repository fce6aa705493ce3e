#include "elastica/cli.hpp"

int main(int argc, char** argv) { return elastica::cli_main(argc, argv); }

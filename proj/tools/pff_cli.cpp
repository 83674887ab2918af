#include "pff/cli.hpp"

int main(int argc, char** argv) { return pff::cli_main(argc, argv); }

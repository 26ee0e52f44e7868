#include "tpg/cli.hpp"

int main(int argc, char** argv) { return tpg::cli_main(argc, argv); }

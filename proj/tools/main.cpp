#include "pgfv/cli.hpp"

int main(int argc, char** argv) { return pgfv::cli_main(argc, argv); }

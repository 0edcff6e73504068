#include "delab/harness/cli.hpp"

int main(int argc, char** argv) { return delab::cli_main(argc, argv); }

#include "ssinfer/cli.hpp"

int main(int argc, char** argv) { return ssinfer::cli_main(argc, argv); }

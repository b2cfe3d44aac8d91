#include "coke/cli.hpp"

int main(int argc, char** argv) { return coke::cli::run_main(argc, argv); }

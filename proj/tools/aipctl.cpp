#include "cli.hpp"

int main(int argc, char** argv) { return aip::cli::run_cli(argc, argv, std::cout, std::cerr); }

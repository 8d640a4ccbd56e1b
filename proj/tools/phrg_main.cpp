#include "phrg/cli.hpp"

int main(int argc, char** argv) { return phrg::cli::run(argc, argv); }

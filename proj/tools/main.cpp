#include "spou/cli.hpp"

int main(int argc, char** argv) { return spou::cli::run(argc, argv); }

#include "bmcopula/cli.hpp"

int main(int argc, char** argv) { return bmcopula::cli::main(argc, argv); }

#include "qmicro/cli.hpp"

int main(int argc, char** argv) { return qmicro::cli::run(argc, argv); }

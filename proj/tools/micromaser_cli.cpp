#include "micromaser/cli.hpp"

int main(int argc, char** argv) { return micromaser::cli::run(argc, argv); }

#include "spinmech/cli.hpp"

int main(int argc, char** argv) { return spinmech::cli::run(argc, argv); }

#include "padsum/cli.hpp"

int main(int argc, char** argv) { return padsum::cli::run(argc, argv); }

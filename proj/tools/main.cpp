#include "neseek/cli.hpp"

int main(int argc, char** argv) { return neseek::cli_main(argc, argv); }

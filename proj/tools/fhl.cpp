#include "fhl/cli.hpp"

int main(int argc, char** argv) { return fhl::run_command(argc, argv); }

#include "edgescale/cli/commands.hpp"

int main(int argc, char** argv) { return edgescale::run_main(argc, argv); }

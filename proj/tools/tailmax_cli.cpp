#include "tailmax/commands.hpp"

int main(int argc, char** argv) { return tailmax::cli_main(argc, argv); }

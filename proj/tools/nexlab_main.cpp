#include "nexlab/cli/run.hpp"

int main(int argc, char** argv) { return nexlab::cli::main_entry(argc, argv); }

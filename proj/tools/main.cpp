#include "cli.hpp"

int main(int argc, char** argv) { return qvn::cli::main_entry(argc, argv); }

#include "ksl_cli.hpp"

int main(int argc, char** argv) { return ksl::cli::main_entry(argc, argv); }

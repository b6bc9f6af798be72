#include "caustica/cli.hpp"

int main(int argc, char** argv) { return caustica::cli::cli_main(argc, argv); }

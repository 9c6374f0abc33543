#include "cli.hpp"

int main(int argc, char** argv) { return levymass::cli::run(argc, argv); }

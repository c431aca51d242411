#include "anisospec/cli.hpp"

int main(int argc, char** argv) { return anisospec::cli::run(argc, argv); }

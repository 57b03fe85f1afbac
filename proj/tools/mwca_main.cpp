#include "mwca/cli.hpp"

int main(int argc, char** argv) { return mwca::cli::run(argc, argv); }

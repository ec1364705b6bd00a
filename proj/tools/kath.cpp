#include "kath/cli.hpp"

int main(int argc, char** argv) { return kath::cli::run(argc, argv); }

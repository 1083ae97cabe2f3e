#include "qbath/cli.hpp"

int main(int argc, char** argv) { return qbath::cli::run(argc, argv); }

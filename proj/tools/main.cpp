#include "kaonlab/cli.hpp"

int main(int argc, char** argv) { return kaonlab::cli::run(argc, argv); }

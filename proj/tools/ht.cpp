#include "ht/cli.hpp"

int main(int argc, char** argv) { return ht::cli::dispatch(argc, argv); }

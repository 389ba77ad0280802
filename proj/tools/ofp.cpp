#include "ofp/cli.hpp"

int main(int argc, char** argv) { return ofp::cli::main(argc, argv); }

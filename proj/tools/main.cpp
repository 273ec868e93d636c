#include "burstcoord/cli.hpp"

int main(int argc, char** argv) { return burstcoord::cli::run(argc, argv); }

#include "cshmm/cli.hpp"

int main(int argc, char** argv) { return cshmm::run_cli(argc, argv); }

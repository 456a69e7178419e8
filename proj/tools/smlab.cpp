#include "smlab/cli.hpp"

int main(int argc, char** argv) { return smlab::run_cli(argc, argv); }

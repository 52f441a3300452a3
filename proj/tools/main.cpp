#include "claimbias/cli.hpp"

int main(int argc, char** argv) { return claimbias::run_cli(argc, argv); }

#include "coexist/cli.hpp"

int main(int argc, char** argv) { return coexist::run_cli(argc, argv); }

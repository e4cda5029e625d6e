#include "qcar/cli.hpp"

int main(int argc, char** argv) { return qcar::run_cli(argc, argv); }

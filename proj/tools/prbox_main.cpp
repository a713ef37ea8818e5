#include "cli.hpp"

int main(int argc, char** argv) { return prbox::run_cli(argc, argv); }

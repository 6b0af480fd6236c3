#include "lgap/cli.hpp"

int main(int argc, char** argv) { return lgap::run_cli(argc, argv); }

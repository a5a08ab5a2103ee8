#include "cli.hpp"

int main(int argc, char** argv) { return kofn::cli::run(argc, argv); }

#include "huakit/cli.hpp"

int main(int argc, char** argv) { return huakit::cli::run(argc, argv); }

#include <kfw/cli.hpp>

int main(int argc, char **argv) { return kfw::cli::run(argc, argv); }

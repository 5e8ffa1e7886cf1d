#include "cli.hpp"

int main(int argc, char** argv) { return guesswho::cli::run(argc, argv); }

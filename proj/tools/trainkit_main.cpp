#include "trainkit/cli.hpp"

int main(int argc, char** argv) { return trainkit::run(argc, argv); }

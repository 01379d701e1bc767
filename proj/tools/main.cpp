#include <iostream>

#include "structlens/cli/cli.h"

int main(int argc, char** argv) {
  return structlens::cli::run(argc, argv, std::cout, std::cerr);
}

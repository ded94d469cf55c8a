#include "octwalk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return octwalk::cli::run_cli(argc, argv, std::cout, std::cerr);
}

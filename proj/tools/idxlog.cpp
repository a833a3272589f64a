#include <iostream>

#include "idxlog/cli.hpp"

int main(int argc, char** argv) {
  return idxlog::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

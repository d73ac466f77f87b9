#include <iostream>

#include "ati/cli.hpp"

int main(int argc, char** argv) {
  return ati::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

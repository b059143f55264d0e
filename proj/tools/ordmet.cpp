#include <iostream>

#include "ordmet/cli.hpp"

int main(int argc, char** argv) {
  return ordmet::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

#include <iostream>

#include "hydroham/cli/commands.hpp"

int main(int argc, char** argv) {
  return hydroham::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

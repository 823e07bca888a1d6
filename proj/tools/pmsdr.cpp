#include <iostream>
#include <string>
#include <vector>

#include "pmsdr/cli.hpp"

int main(int argc, char** argv) {
  return pmsdr::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr,
                         std::cin);
}

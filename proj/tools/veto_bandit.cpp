#include <iostream>
#include <string>
#include <vector>

#include "veto/cli.hpp"

int main(int argc, char** argv) {
  return veto::execute_command(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

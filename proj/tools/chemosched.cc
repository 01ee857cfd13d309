#include <iostream>
#include <string>
#include <vector>

#include "chemo/cli.h"

int main(int argc, char** argv) {
  return chemo::RunCli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

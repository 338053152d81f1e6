#include <iostream>

#include "datagame/cli.hpp"

int main(int argc, char** argv) {
  return datagame::cli::run(argc, argv, std::cout, std::cerr);
}

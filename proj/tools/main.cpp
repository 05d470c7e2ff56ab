#include <iostream>

#include "sftroof/cli.hpp"

int main(int argc, char** argv) {
  return sftroof::cli::run(argc, argv, std::cout, std::cerr);
}

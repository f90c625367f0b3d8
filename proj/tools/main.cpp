#include <iostream>

#include "bailab/cli.hpp"

int main(int argc, char** argv) {
  return bailab::cli::dispatch(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "sphere_poisson/cli.hpp"

int main(int argc, char** argv) {
  return sphere_poisson::run_cli(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "morse_concordance/cli.hpp"

int main(int argc, char** argv) {
  return morse_concordance::cli::run(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "asekit_cli/app.hpp"

int main(int argc, char** argv) {
  return asekit::cli::run_command(argc, argv, std::cout, std::cerr);
}

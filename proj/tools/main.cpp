#include <iostream>

#include "lassocert/cli.hpp"

int main(int argc, char** argv) {
  try {
    const lassocert::RunConfig cfg = lassocert::parse_cli(argc, argv);
    return lassocert::run_cli(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include <cstdlib>
#include <iostream>

#include "mwe_triage/cli.hpp"

int main(int argc, char** argv) {
  return mwe::run_cli(argc, argv, std::getenv(mwe::kLexiconEnv), std::cin, std::cout, std::cerr);
}

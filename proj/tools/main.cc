#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return sitebench::RunCli(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "xxzdm/cli.hpp"

int main(int argc, char** argv)
{
  return xxzdm::run_cli(argc, argv, std::cout, std::cerr);
}

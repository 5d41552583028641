#include "q1d/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return q1d::run_cli({argv, argv + argc}, std::cout, std::cerr); }

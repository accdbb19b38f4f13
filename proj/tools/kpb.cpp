#include <iostream>

#include "kpb/cli/app.hpp"

int main(int argc, char** argv) { return kpb::cli::run(argc, argv, std::cout, std::cerr); }

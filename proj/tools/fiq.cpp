#include <iostream>
#include <string>
#include <vector>

#include "fiq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return fiq::cli::parse_and_dispatch(args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "fiq: " << e.what() << "\n";
        return 3;
    }
}

#include "zcycles/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    try {
        return zcycles::cli::run_cli({argv, argv + argc}, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "zcycles: " << e.what() << '\n';
        return zcycles::cli::kUsage;
    }
}

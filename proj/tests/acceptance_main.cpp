#include <iostream>

#include "slnz/acceptance.hpp"

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") quick = true;
    auto results = slnz::run_acceptance(quick);
    return slnz::print_acceptance(std::cout, results);
}

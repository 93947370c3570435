#include <vector>

#include "permreg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return permreg::cli::run(std::move(args));
}

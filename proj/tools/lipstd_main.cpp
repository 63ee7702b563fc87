#include <string>
#include <vector>

#include "lipstd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lipstd::cli::run(args);
}

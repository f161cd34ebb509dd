#include <string>
#include <vector>

#include "nfisac/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nfisac::cli::run_main(args);
}

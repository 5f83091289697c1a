#include <string>
#include <vector>

#include "ltr/cli.hpp"

int main(int argc, char** argv) {
    return ltr::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}

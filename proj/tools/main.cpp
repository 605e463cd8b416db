#include "bivsurv/cli.hpp"

int main(int argc, char** argv) {
    return bivsurv::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}

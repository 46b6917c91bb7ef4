#include "commands.hpp"

int main(int argc, char** argv) {
    return robust_lrt::cli::run(argc, argv);
}

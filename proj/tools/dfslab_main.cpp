#include "dfslab/cli.hpp"

int main(int argc, char** argv) {
    return dfslab::cli::run(argc, argv);
}

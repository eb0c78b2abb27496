#include "diffspec/cli.hpp"

int main(int argc, char** argv)
{
    return diffspec::cli::main(argc, argv);
}

#include "tristab/cli.hpp"

int main(int argc, char** argv)
{
    return tristab::cli_main(argc, argv);
}

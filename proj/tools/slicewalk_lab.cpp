#include "slicewalk/cli.hpp"

int main(int argc, char** argv) { return slicewalk::cli_dispatch(argc, argv); }

#include "censorlens/app/cli.hpp"

int main(int argc, char** argv) { return censorlens::app::run(argc, argv); }

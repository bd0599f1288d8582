#include "wavedesign/cli/commands.hpp"

int main(int argc, char** argv) { return wavedesign::cli::run(argc, argv); }

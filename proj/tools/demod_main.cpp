#include "demod/frontend.hpp"

int main(int argc, char** argv) { return demod::run_cli(argc, argv); }

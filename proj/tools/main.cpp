#include "bandit_debias/cli.hpp"

int main(int argc, char** argv) { return bdb::dispatch(argc, argv); }

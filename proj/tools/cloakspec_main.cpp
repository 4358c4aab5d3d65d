#include "cloakspec/cli.hpp"

int main(int argc, char** argv) { return cloakspec::dispatch(argc, argv); }

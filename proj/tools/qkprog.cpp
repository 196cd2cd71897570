#include "qkprog/cli/cli.hpp"

int main(int argc, char** argv) {
  return qkprog::cli::run(argc, argv);
}

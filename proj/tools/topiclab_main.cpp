#include <string>
#include <vector>

#include "topiclab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return topiclab::cli::run(args);
}

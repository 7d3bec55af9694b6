#include <string>
#include <vector>

#include "hopadv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hopadv::run_command(args);
}

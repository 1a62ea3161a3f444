#include <cstdio>

#include "uhit/version.hpp"

int main() {
  std::printf("uhit %s\n", uhit::version_string);
  return 0;
}

#include <cstdio>

int main() {
  std::printf("ymtg: placeholder\n");
  return 0;
}

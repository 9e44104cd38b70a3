#include <iostream>

int main() {
  std::cout << "commnet: not wired yet\n";
  return 0;
}

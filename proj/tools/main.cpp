#include <iostream>

int main() {
  std::cout << "conelab CLI placeholder\n";
  return 0;
}

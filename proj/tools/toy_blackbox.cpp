// The toy problem served over the line protocol: reads "x1 x2" per line and
// answers "f c1 c2". Used to check that external runs match in-process ones.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "albo/problems.hpp"

int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream ss(line);
    std::vector<double> x;
    std::string tok;
    while (ss >> tok) {
      const auto v = albo::parse_double(tok);
      if (!v) {
        std::cout << "error: bad input '" << tok << "'" << std::endl;
        return 1;
      }
      x.push_back(*v);
    }
    if (x.size() != 2) {
      std::cout << "error: expected 2 inputs" << std::endl;
      return 1;
    }
    std::cout << albo::format_double(albo::toy::objective(x)) << ' '
              << albo::format_double(albo::toy::constraint1(x)) << ' '
              << albo::format_double(albo::toy::constraint2(x)) << std::endl;
  }
  return 0;
}

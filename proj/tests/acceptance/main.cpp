#include <iostream>

#include "spinscale/acceptance/acceptance.hpp"

int main() { return spinscale::acceptance::run_all(std::cout) ? 0 : 1; }

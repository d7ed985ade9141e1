// Classifies every representative state and prints one row per state.

#include <iomanip>
#include <iostream>

#include "entangle/entangle.hpp"

int main() {
  using namespace entangle;
  std::cout << std::left << std::setw(16) << "system" << std::setw(5) << "row" << std::setw(13) << "class"
            << std::setw(6) << "rank" << std::setw(10) << "|T|" << "cuts\n";
  for (const auto& rep : reps::table_representatives()) {
    const auto label = classify::classify_state(rep.state);
    std::cout << std::setw(16) << rep.system << std::setw(5) << rep.row << std::setw(13) << classify::name(label.name)
              << std::setw(6) << freudenthal::to_int(*label.rank) << std::setw(10) << std::fixed << std::setprecision(6)
              << *label.invariants.tangle;
    for (const auto& c : label.cut_pattern) std::cout << c.to_string() << " ";
    std::cout << "\n";
  }
}

// Writes the representative states, the four-qubit pair and the X (x) I (x) I
// matrix file into a directory (default: data/states).

#include <filesystem>
#include <fstream>
#include <iostream>

#include "entangle/entangle.hpp"

namespace fs = std::filesystem;
using namespace entangle;

static void write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  std::cout << path.string() << "\n";
}

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? argv[1] : "data/states";
  fs::create_directories(dir);
  for (const auto& rep : reps::table_representatives()) write(dir / (rep.stem() + ".json"), io::dump_state(rep.state, true));
  write(dir / "four_qubit_P.json", io::dump_state(reps::four_qubit_P(), true));
  write(dir / "four_qubit_Q.json", io::dump_state(reps::four_qubit_Q(), true));

  // As an action on the fermionic image of a four-qubit state: one 8x8 block.
  const auto p_image = embed::phi(reps::four_qubit_P());
  write(dir / "four_qubit_P_image.json", io::dump_state(p_image, true));
  const fs::path matrices = dir.parent_path() / "matrices";
  fs::create_directories(matrices);
  write(matrices / "x_first_factor.json", io::dump_matrices({reps::x_on_first_factor()}));
  return 0;
}

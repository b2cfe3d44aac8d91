#include "coke/random.hpp"

#include <sstream>

#include "coke/types.hpp"

namespace coke {

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string RandomSource::state() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void RandomSource::restore_state(const std::string& s) {
  std::istringstream in(s);
  in >> engine_;
  if (in.fail()) throw DataError("corrupt random engine state in checkpoint");
}

}  // namespace coke

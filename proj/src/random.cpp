#include "dsmark/random.hpp"

namespace dsmark {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ (stream * 0xd1b54a32d192ed03ULL);
  h = splitmix64(s);
  s = h ^ (index * 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(s);
}

}  // namespace dsmark

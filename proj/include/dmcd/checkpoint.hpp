#pragma once

// Binary container for solver state.
//
//   "DMCDCKPT"            8 bytes
//   version               u32 (currently 1)
//   iteration             u32
//   array count           u32
//   per array:
//     name length, name   u32, bytes
//     rows, cols          u32, u32
//     values              rows*cols float64, row-major
//
// Integers and doubles are little-endian.

#include <cstdint>
#include <string>
#include <vector>

#include "dmcd/solver.hpp"

namespace dmcd {

struct NamedArray {
  std::string name;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> values;
};

struct Checkpoint {
  std::uint32_t iteration = 0;
  std::vector<NamedArray> arrays;

  const NamedArray& find(const std::string& name) const;
};

void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

Checkpoint to_checkpoint(const SolverState& s);
SolverState from_checkpoint(const Checkpoint& c);

}  // namespace dmcd

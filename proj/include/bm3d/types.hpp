#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace bm3d {

using Real = double;

// Raster data is stored row-major so scanline loops and file I/O walk memory linearly.
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated precondition or type invariant.
struct ContractError : Error {
  using Error::Error;
};

// Unreadable, unwritable, or malformed image file.
struct IoError : Error {
  using Error::Error;
};

// A pixel received zero aggregation weight; indicates a scan-grid bug.
struct CoverageError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

}  // namespace bm3d

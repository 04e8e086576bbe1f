#pragma once

#include <stdexcept>
#include <string>

namespace spclust {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

// Recoverable: Metropolis proposals that break positive definiteness are
// treated as rejections by the caller.
struct NotPositiveDefinite : Error {
  int pivot;
  explicit NotPositiveDefinite(int pivot_index)
      : Error("matrix not positive definite at pivot " +
              std::to_string(pivot_index)),
        pivot(pivot_index) {}
};

struct NumericalDegeneracy : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

struct DegenerateGeometry : Error {
  using Error::Error;
};

struct IngestionError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

}  // namespace spclust

#pragma once

#include <stdexcept>
#include <string>

namespace hst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct ReconstructionError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hst

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ascvqe {

using cplx = std::complex<double>;

// Terms whose coefficient magnitude falls below this are dropped on simplification.
inline constexpr double kSimplifyTolerance = 1e-12;

// Largest qubit count accepted by dense_matrix().
inline constexpr std::size_t kDenseQubitLimit = 14;

// Qubit ceiling for statevector work (and the oracle's sector restriction).
inline constexpr std::size_t kMaxQubits = 24;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class UnsupportedReferenceError : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominatorError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGeneratorError : public Error {
 public:
  using Error::Error;
};

class NonHermitianObservableError : public Error {
 public:
  using Error::Error;
};

}  // namespace ascvqe

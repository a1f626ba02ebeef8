#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pcz {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Every failure a module reports derives from Error so the CLI can map it to
// a nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Coupler frequency too close to a qubit for the dispersive coupling formula.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// Coupler flux left the domain where the coupling curve is valid.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcz

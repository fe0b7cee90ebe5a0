#pragma once

#include <stdexcept>
#include <string>

namespace et14 {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes (DomainError -> 3, everything else a caller could fix in the
// configuration -> 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Odd rank where an even one is required (Kronecker-delta products).
class ParityError : public Error {
 public:
  using Error::Error;
};

/// Contraction slots do not consume the tensor rank.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside lambda_ll > 0 or another mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Series truncation too small for the requested coefficient, or a member
/// index beyond what the generating family provides.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Generating family rejected by the ladder gate.
class FamilyError : public Error {
 public:
  FamilyError(const std::string& what, int failing_s)
      : Error(what), failing_s_(failing_s) {}
  int failing_s() const { return failing_s_; }

 private:
  int failing_s_;
};

class DecayError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace et14

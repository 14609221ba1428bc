#pragma once

#include <stdexcept>
#include <string>

namespace univoque {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A digit operation would leave {0,...,M}.
class OutOfAlphabet : public Error {
 public:
  using Error::Error;
};

// A certified comparison could not be decided at maximum refinement.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class NotAdmissible : public Error {
 public:
  using Error::Error;
};

class EmptySubshift : public Error {
 public:
  using Error::Error;
};

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class WordNotInLanguage : public Error {
 public:
  using Error::Error;
};

// Sequence fails reflect(a) <= shift^n(a) <= a for some n.
class NotInV : public Error {
 public:
  using Error::Error;
};

// Sequence is not strictly between the Komornik-Loreti limit and xi(1).
class NotInRange : public Error {
 public:
  using Error::Error;
};

class NotAPlateauGenerator : public Error {
 public:
  enum class Reason { Inadmissible, Reducible, BelowKL };

  NotAPlateauGenerator(Reason reason, const std::string& what)
      : Error(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace univoque

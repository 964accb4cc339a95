#pragma once

#include <stdexcept>
#include <string>

namespace pseudobracket {

  // Base of everything the library throws on bad input.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed text (PD terms, JSON, polynomial strings, KnotInfo rows).
  class ParseError : public Error {
   public:
    using Error::Error;
  };

  // Well-formed input that does not describe a planar oriented diagram.
  class ValidationError : public Error {
   public:
    using Error::Error;
  };

  class AmbiguousOrientation : public ValidationError {
   public:
    using ValidationError::ValidationError;
  };

  // An operation that needs an over/under crossing was pointed at a pseudo one.
  class NotClassical : public Error {
   public:
    using Error::Error;
  };

  class TooLarge : public Error {
   public:
    using Error::Error;
  };

  class DivisionByZero : public Error {
   public:
    using Error::Error;
  };

  class UnknownArc : public Error {
   public:
    using Error::Error;
  };

  class NotSameFace : public Error {
   public:
    using Error::Error;
  };

  class HasPseudoCrossings : public Error {
   public:
    using Error::Error;
  };

  class MultiComponent : public Error {
   public:
    using Error::Error;
  };

}  // namespace pseudobracket

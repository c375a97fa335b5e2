#pragma once

#include <stdexcept>
#include <string>

namespace cofee {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (ontology file, CSV, JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Cross-reference or uniqueness violation inside an ontology or lexicon.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Lookup of an id that does not exist (subtype, slot, trigger, entity, label).
class UnknownElementError : public Error {
 public:
  using Error::Error;
};

class EncodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace cofee

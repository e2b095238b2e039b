#pragma once

#include <stdexcept>
#include <string>

namespace psc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input contains a character outside the 20-letter residue alphabet.
struct NoiseError : Error {
  NoiseError(std::size_t position, char character, std::string record = {})
      : Error(message(position, character, record)),
        position(position),
        character(character),
        record(std::move(record)) {}

  std::size_t position;  // 1-based index among residue characters
  char character;
  std::string record;  // FASTA identifier when parsing a file, else empty

 private:
  static std::string message(std::size_t pos, char c, const std::string& rec) {
    std::string m = "invalid residue '";
    m += c;
    m += "' at position " + std::to_string(pos);
    if (!rec.empty()) m += " in record '" + rec + "'";
    return m;
  }
};

struct EmptyInput : Error {
  EmptyInput() : Error("no residues in input") {}
};

struct FormatError : Error {
  using Error::Error;
};

struct UnknownResidue : Error {
  explicit UnknownResidue(char c)
      : Error(std::string("unknown residue '") + c + "'"), character(c) {}
  char character;
};

struct SequenceTooShort : Error {
  explicit SequenceTooShort(std::size_t length)
      : Error("sequence of length " + std::to_string(length) +
              " is too short for 2-gram extraction"),
        length(length) {}
  std::size_t length;
};

struct StorageError : Error {
  using Error::Error;
};

struct EmptyWarehouse : Error {
  EmptyWarehouse() : Error("warehouse has no rows") {}
};

struct InsufficientData : Error {
  using Error::Error;
};

struct InsufficientCandidates : Error {
  using Error::Error;
};

struct DegenerateRange : Error {
  DegenerateRange() : Error("feature range is degenerate (min equals max)") {}
};

}  // namespace psc

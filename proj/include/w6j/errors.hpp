#pragma once

#include <stdexcept>
#include <string>

namespace w6j {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument values (negative j, |m| > j, non-integer j - m, ...).
struct DomainError : Error {
  using Error::Error;
};

// radical_add on two nonzero radicals with different radicands.
struct IncompatibleRadicands : Error {
  using Error::Error;
};

// Work or memory limit exceeded (factorial cache cap, m-sum lattice size).
struct ResourceLimit : Error {
  using Error::Error;
};

// Malformed JSON input.
struct ParseError : Error {
  using Error::Error;
};

// Well-formed JSON that violates the network schema or graph invariants.
struct ValidationError : Error {
  using Error::Error;
};

// Edge id not present in the network.
struct UnknownEdge : Error {
  using Error::Error;
};

// Stub operation applied to a node that is not a 2j-node.
struct NotATwoJNode : Error {
  using Error::Error;
};

// Geometric construction impossible (violated triangle/polygon constraints,
// degenerate configuration where a unique answer is required).
struct DegenerateConfig : Error {
  using Error::Error;
};

// A requested classical range is empty.
struct EmptyRange : Error {
  using Error::Error;
};

// A requested level set does not intersect the reduced phase space.
struct EmptyLevelSet : Error {
  using Error::Error;
};

// Semiclassical evaluation requested outside the classically allowed region.
struct NotAllowed : Error {
  using Error::Error;
};

// Weyl-symbol lookup for an operator that is not tabulated.
struct UnknownOperator : Error {
  using Error::Error;
};

// Bad command-line usage (maps to exit code 2 in the CLI).
struct UsageError : Error {
  using Error::Error;
};

}  // namespace w6j

#pragma once

#include <stdexcept>
#include <string>

namespace spectree {

// Error taxonomy mirrored by the CLI exit codes: argument/structure errors
// are usage problems (exit 2), parse/schema/io errors are input problems
// (exit 3). Verification mismatches are reported as data, not thrown.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument values or decomposition geometry (P, m, p, G, k, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed linked tree handed to the encoder (non-full node, class on an
// internal node, missing leaf class). Message carries the node path.
class StructureError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Malformed file content; message carries file, row and column.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid or wrong-version tree JSON; message names the file.
class SchemaError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Filesystem-level failures (open, read, write).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spectree

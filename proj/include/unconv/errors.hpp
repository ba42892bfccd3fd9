#pragma once

#include <stdexcept>
#include <string>

namespace unconv {

// Contract violations raised at library entry points. The hierarchy is kept
// flat so callers (and the command-line tool) can map each failure class to
// a distinct exit path.

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dense operands with mismatched dimensions, or coefficient lists whose
// length does not match the operand.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidPermutation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidBlocks : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested diagnostic method cannot be applied to the series shape.
struct UnsupportedMethod : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A term index beyond the end of a finite (file-backed or explicit-list)
// source.
struct ExhaustedStream : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct NotAFrame : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Threshold rule with a negative cutoff or mask weights outside [0, 1].
struct InvalidRule : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input file (series, gradient stream, or frame).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace unconv

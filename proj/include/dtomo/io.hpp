#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "dtomo/core.hpp"
#include "dtomo/instance.hpp"

namespace dtomo {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

// Instance text format:
//   DTOMO 1
//   nodes <N>
//   rays <R>
//   ray <id> : <node indices> = <P(r)>     (R lines, ids 0..R-1, any order)
//   seed <S>                               (optional; defaults to 0)
// Throws ParseError for malformed input and InfeasibleError for projections
// no image can satisfy.
TomographyInstance parse_instance(std::string_view text);

// Canonical serialization: rays in id order, single spaces, trailing seed
// line, Unix newlines. parse/serialize round-trips byte-identically.
std::string serialize_instance(const TomographyInstance& instance);

// Image text format: "DIMG <d1> [<d2> [<d3>]]" followed by one 0/1 row per
// line; 3D layers (d1 of them) are separated by a blank line.
BinaryImage parse_image(std::string_view text);
std::string serialize_image(const BinaryImage& image);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace dtomo

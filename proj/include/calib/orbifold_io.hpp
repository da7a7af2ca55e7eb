#pragma once

// Plain-text map declarations, one map per line:
//
//   alpha: -1 0 ; 0 1 | 1/2 0
//
// Matrix rows are separated by ';', the optional translation follows '|'.
// '#' starts a comment.  format_maps(parse_maps(s)) is a fixed point.

#include <stdexcept>
#include <string>
#include <vector>

#include "calib/orbifold.hpp"
#include "calib/parse_error.hpp"

namespace calib {

AffineTorusMap parse_map(const std::string& line, int line_number = 1);
std::vector<AffineTorusMap> parse_maps(const std::string& text);

std::string format_map(const AffineTorusMap& map);
std::string format_maps(const std::vector<AffineTorusMap>& maps);

Rational parse_rational(const std::string& token);
std::string format_rational(const Rational& q);

}  // namespace calib

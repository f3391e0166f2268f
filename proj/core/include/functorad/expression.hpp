#pragma once

#include <string>
#include <string_view>

#include "functorad/smoothmap.hpp"

namespace functorad {

/// Renders a map in the textual expression notation (see
/// docs/expressions.md). The output is canonical: parsing it yields a map
/// structurally equal to the input.
std::string to_string(const SmoothMap& f);

/// Parses the expression notation into a map on R^n. Throws ParseError
/// (field "expression") on malformed text or inconsistent dimensions.
SmoothMap parse_expression(std::string_view text, Eigen::Index n);

}  // namespace functorad

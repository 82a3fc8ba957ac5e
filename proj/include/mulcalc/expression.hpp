#pragma once

#include <string_view>

#include "mulcalc/identities.hpp"

namespace mulcalc::cli {

/// Parses an expression in the variable `t` and returns it with its exact
/// derivative (forward-mode dual numbers).
///
/// Grammar: numbers, t, pi, e, + - * / ^, parentheses, unary minus and the
/// functions exp, log, sqrt, sin, cos. Throws DomainError on syntax errors.
DifferentiableMap parse_expression(std::string_view text);

}  // namespace mulcalc::cli

#pragma once

#include <cstddef>
#include <string_view>

#include "json.hpp"

#include "polydens/multipoly.hpp"

namespace polydens {

/// Parses polynomial text over the variables x1..x{n_vars}.
///
/// Grammar (see docs/grammar.md): integer literals, variables, + - * ^ and
/// parentheses. `^` binds tightest and takes a non-negative integer literal;
/// binary operators are left-associative; unary minus is allowed.
///
/// Throws ParseError (with byte position) on syntax errors, unknown
/// variables, negative exponents, or a result equal to the zero polynomial.
MultiPoly parse_polynomial(std::string_view text, std::size_t n_vars);

/// {"n": int, "terms": [{"e": [ints], "c": "decimal string"}]}
nlohmann::json to_json(const MultiPoly& f);
MultiPoly poly_from_json(const nlohmann::json& j);

}  // namespace polydens

#pragma once

#include "carlock/expr.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace carlock {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, std::string found, std::vector<std::string> expected);

    std::size_t position() const { return position_; }
    const std::string& found() const { return found_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t position_;
    std::string found_;
    std::vector<std::string> expected_;
};

// Grammar (whitespace-separated tokens; juxtaposition is operator product):
//   expr    := [ "+" | "-" ] term { ("+" | "-") term }
//   term    := [ coeff ] factor { factor } | coeff
//   factor  := ladder | "(" expr ")"
//   ladder  := "a" integer [ "^" ]          a3 annihilates, a3^ creates
//   coeff   := "(" [-] float [ ("+"|"-") float "i" ] ")" | float
// Mode indices are >= 1.  Parsing performs no normal ordering.
OperatorExpr parse_expr(std::string_view text);

// Shortest round-trip decimal form of a double ("1", "0.5", "1e-12").
std::string format_real(double x);

// Canonical pretty printer; parse_expr(to_string(e)) == e structurally.
// The zero expression prints as "0".
std::string to_string(const OperatorExpr& e);

// Label for a bare factor sequence with unit coefficient ("1" for identity).
std::string to_string(const std::vector<LadderOp>& factors);

} // namespace carlock

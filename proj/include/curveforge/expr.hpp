#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "curveforge/errors.hpp"

/// Scalar formulas of the arc-length variable `s`.
///
/// Grammar:
///   expr  := term (('+'|'-') term)*
///   term  := factor (('*'|'/') factor)*
///   factor:= ('-')? power
///   power := atom ('^' factor)?
///   atom  := number | 'pi' | 'e' | 's' | ident '(' expr ')' | '(' expr ')'
///
/// Functions: sin cos tan exp log sqrt abs arccos arctan.
/// There is no implicit multiplication, so "2s" is a syntax error.
namespace curveforge::expr {

struct Node;

/// Immutable parsed formula. Copies share the tree; evaluation is pure and
/// may run concurrently.
class Expression {
 public:
  Expression() = default;

  double operator()(double s) const;

  /// Fully parenthesized text that re-parses to an identically-evaluating tree.
  std::string to_string() const;

  bool empty() const noexcept { return root_ == nullptr; }

 private:
  friend Expression parse(std::string_view text);
  friend double eval(const Expression& expr, double s);
  friend std::string print(const Expression& expr);
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  std::shared_ptr<const Node> root_;
};

/// Throws ParseError (with byte offset and expected-token set) or
/// UnknownIdentifierError.
Expression parse(std::string_view text);

/// Throws DomainError naming the offending node when any sub-evaluation
/// leaves its domain or produces a non-finite value.
double eval(const Expression& expr, double s);

std::string print(const Expression& expr);

}  // namespace curveforge::expr

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biform/jet.hpp"

namespace biform {

/// Compiled arithmetic expression over named variables.
///
/// Grammar: numbers, variables, `pi`, `e`, binary + - * / ^, unary -, and the
/// functions sin cos exp log sqrt tanh atan. `^` is right-associative; an
/// integer exponent is expanded to repeated products.
class Expression {
 public:
  struct Node;

  /// Throws biform::Error with the offending column on malformed input.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  Jet eval(std::span<const Jet> vars) const;
  double eval(std::span<const double> vars) const;
  const std::string& text() const { return text_; }
  std::size_t arity() const { return variables_.size(); }

 private:
  std::string text_;
  std::vector<std::string> variables_;
  std::shared_ptr<const Node> root_;
};

}  // namespace biform

#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace pmsdr {

/// A scalar arithmetic expression in one variable `u`, e.g. "log(1+exp(-u))".
///
/// Grammar: numbers, `u`, `pi`, binary + - * / ^ (right-associative), unary
/// minus, parentheses and the functions exp, log, log1p, sqrt, abs, pow, max,
/// min. Parsed once; evaluation is const and safe to call concurrently.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double u) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace pmsdr

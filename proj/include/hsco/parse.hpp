#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <string_view>

#include "hsco/errors.hpp"
#include "hsco/multi_index.hpp"
#include "hsco/polynomial.hpp"

namespace hsco {

namespace detail {

// Recursive-descent reader for the symbol expression language:
//
//   expr   := [sign] term { ('+'|'-') term }
//   term   := coeff ['*' mono] | mono
//   coeff  := REAL | '(' [sign] REAL [('+'|'-') REAL 'i'] ')'
//   mono   := varpow { '*' varpow }
//   varpow := 'z' [INDEX] ['^' UINT]
//
// Bare 'z' is admitted only in one-variable contexts. Every rejection carries
// the byte offset of the offending token.
class ExprReader {
 public:
  ExprReader(std::string_view text, std::size_t vars) : text_(text), vars_(vars) {}

  PolynomialMap read() {
    std::map<MultiIndex, Complex, CanonicalLess> acc;
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    read_term(acc, sign);
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-')
        throw ParseError("expected '+' or '-' between terms", pos_);
      take();
      read_term(acc, c == '-' ? -1.0 : 1.0);
    }
    return PolynomialMap(vars_, acc);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  static bool starts_number(char c) { return (c >= '0' && c <= '9') || c == '.'; }

  double read_real() {
    skip_ws();
    if (at_end()) throw ParseError("expected a number", pos_);
    double out = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr == first)
      throw ParseError("malformed number", pos_);
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return out;
  }

  std::uint64_t read_digits(std::uint64_t cap, const char* what) {
    skip_ws();
    const std::size_t at = pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError(std::string("expected ") + what, pos_);
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(take() - '0');
      if (v > cap)
        throw ExponentOverflow(std::string(what) + " exceeds the supported range", at);
    }
    return v;
  }

  Complex read_coeff() {
    skip_ws();
    if (peek() != '(') return Complex{read_real(), 0.0};
    const std::size_t open = pos_;
    take();
    skip_ws();
    double sr = 1.0;
    if (!at_end() && (peek() == '+' || peek() == '-')) sr = take() == '-' ? -1.0 : 1.0;
    const double re = sr * read_real();
    skip_ws();
    if (at_end()) throw ParseError("unterminated parenthesized coefficient", open);
    if (peek() == ')') {
      take();
      return Complex{re, 0.0};
    }
    if (peek() != '+' && peek() != '-')
      throw ParseError("expected ')' or an imaginary part", pos_);
    const double si = take() == '-' ? -1.0 : 1.0;
    const double im = si * read_real();
    skip_ws();
    if (at_end() || peek() != 'i') throw ParseError("expected 'i'", pos_);
    take();
    skip_ws();
    if (at_end() || peek() != ')') throw ParseError("expected ')'", pos_);
    take();
    return Complex{re, im};
  }

  void read_varpow(std::vector<std::uint32_t>& exps) {
    skip_ws();
    const std::size_t at = pos_;
    if (at_end() || peek() != 'z') throw ParseError("expected a variable", pos_);
    take();
    std::size_t index = 1;
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::uint64_t v = read_digits(1000000, "variable index");
      if (v == 0 || v > vars_)
        throw UnknownVariable("variable index out of range", at);
      index = static_cast<std::size_t>(v);
    } else if (vars_ != 1) {
      throw UnknownVariable("bare 'z' needs an index in a multi-variable context", at);
    }
    std::uint64_t e = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      take();
      e = read_digits(MultiIndex::kMaxExponent, "exponent");
    }
    const std::uint64_t total = exps[index - 1] + e;
    if (total > MultiIndex::kMaxExponent)
      throw ExponentOverflow("accumulated exponent exceeds the supported range", at);
    exps[index - 1] = static_cast<std::uint32_t>(total);
  }

  void read_term(std::map<MultiIndex, Complex, CanonicalLess>& acc, double sign) {
    skip_ws();
    if (at_end()) throw ParseError("dangling sign", pos_);
    Complex coeff{1.0, 0.0};
    bool have_coeff = false;
    if (starts_number(peek()) || peek() == '(') {
      coeff = read_coeff();
      have_coeff = true;
    }
    std::vector<std::uint32_t> exps(vars_, 0u);
    bool have_mono = false;
    skip_ws();
    if (have_coeff) {
      if (!at_end() && peek() == '*') {
        take();
        read_varpow(exps);
        have_mono = true;
      }
    } else {
      read_varpow(exps);
      have_mono = true;
    }
    if (have_mono) {
      for (;;) {
        skip_ws();
        if (at_end() || peek() != '*') break;
        take();
        read_varpow(exps);
      }
    }
    const MultiIndex J{exps};
    const Complex add = sign * coeff;
    auto [it, fresh] = acc.emplace(J, add);
    if (!fresh) it->second += add;
  }

  std::string_view text_;
  std::size_t vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses the expression language into a polynomial in `vars` variables.
inline PolynomialMap parse_poly(std::string_view text, std::size_t vars) {
  if (vars == 0) throw DimensionMismatch("expression context needs at least one variable");
  return detail::ExprReader(text, vars).read();
}

}  // namespace hsco

#include "functorad/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "functorad/errors.hpp"

namespace functorad {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void print(const Node& n, std::string& out) {
  auto args = [&](const char* name) {
    out += name;
    out += '(';
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) out += ", ";
      print(*n.args[i], out);
    }
  };
  switch (n.op) {
    case Op::Input:
      out += 'x';
      return;
    case Op::Constant:
      out += "const(";
      for (Eigen::Index i = 0; i < n.constant.size(); ++i) {
        if (i) out += ", ";
        out += num(n.constant[i]);
      }
      out += ')';
      return;
    case Op::Project:
      if (n.args[0]->op == Op::Input && n.indices.size() == 1) {
        out += 'x' + std::to_string(n.indices[0]);
        return;
      }
      out += "proj(";
      print(*n.args[0], out);
      for (auto i : n.indices) out += ", " + std::to_string(i);
      out += ')';
      return;
    case Op::Linear:
      out += "lin([";
      for (Eigen::Index r = 0; r < n.matrix.rows(); ++r) {
        out += r ? ", [" : "[";
        for (Eigen::Index c = 0; c < n.matrix.cols(); ++c) {
          if (c) out += ", ";
          out += num(n.matrix(r, c));
        }
        out += ']';
      }
      out += "], ";
      print(*n.args[0], out);
      out += ')';
      return;
    case Op::Add:
    case Op::Multiply:
      out += '(';
      print(*n.args[0], out);
      out += n.op == Op::Add ? " + " : " * ";
      print(*n.args[1], out);
      out += ')';
      return;
    case Op::Scale:
      out += '(' + num(n.scalar) + " * ";
      print(*n.args[0], out);
      out += ')';
      return;
    case Op::Tuple:
      if (n.args.size() == 1) {
        args("tuple");
        out += ')';
        return;
      }
      args("");
      out += ')';
      return;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Reciprocal:
    case Op::Norm:
      args(op_name(n.op));
      out += ')';
      return;
    case Op::Power:
      args("pow");
      out += ", " + std::to_string(n.exponent) + ')';
      return;
    case Op::Guard:
      args("guard");
      out += ", " + num(n.scalar) + ')';
      return;
  }
}

// A parsed operand: a bare numeric literal stays a number until context
// decides whether it is a scale factor or a 1-dim constant.
struct Item {
  std::optional<double> literal;
  std::optional<SmoothMap> map;
};

class Parser {
 public:
  Parser(std::string_view text, Eigen::Index n) : text_(text), n_(n) {}

  SmoothMap parse() {
    Item it = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return materialize(std::move(it));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at column " << (pos_ + 1);
    throw ParseError("expression", 0, os.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  SmoothMap materialize(Item it) {
    if (it.map) return std::move(*it.map);
    return SmoothMap::constant(n_, Vector::Constant(1, *it.literal));
  }

  template <class F>
  SmoothMap build(F&& f) {
    try {
      return f();
    } catch (const ContractError& e) {
      fail(e.what());
    }
  }

  Item expr() {
    Item lhs = term();
    for (;;) {
      if (accept('+')) {
        Item rhs = term();
        auto a = materialize(std::move(lhs));
        auto b = materialize(std::move(rhs));
        lhs = Item{std::nullopt, build([&] { return a + b; })};
      } else if (accept('-')) {
        Item rhs = term();
        auto a = materialize(std::move(lhs));
        auto b = materialize(std::move(rhs));
        lhs = Item{std::nullopt, build([&] { return a - b; })};
      } else {
        return lhs;
      }
    }
  }

  Item term() {
    Item lhs = unary();
    for (;;) {
      if (accept('*')) {
        Item rhs = unary();
        auto b = materialize(std::move(rhs));
        if (lhs.literal) {
          const double s = *lhs.literal;
          lhs = Item{std::nullopt, build([&] { return scale(s, b); })};
        } else {
          auto a = materialize(std::move(lhs));
          lhs = Item{std::nullopt, build([&] { return multiply(a, b); })};
        }
      } else if (accept('/')) {
        Item rhs = unary();
        auto a = materialize(std::move(lhs));
        auto b = materialize(std::move(rhs));
        lhs = Item{std::nullopt, build([&] { return a / b; })};
      } else {
        return lhs;
      }
    }
  }

  Item unary() {
    if (accept('-')) {
      Item it = unary();
      if (it.literal) return Item{-*it.literal, std::nullopt};
      auto a = std::move(*it.map);
      return Item{std::nullopt, build([&] { return scale(-1.0, a); })};
    }
    return primary();
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    std::string buf(begin, text_.size() - pos_);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str()) fail("expected a number");
    if (!std::isfinite(v)) fail("number is not finite");
    pos_ += static_cast<std::size_t>(end - buf.c_str());
    return v;
  }

  double signed_number() {
    const bool neg = accept('-');
    const double v = number();
    return neg ? -v : v;
  }

  long integer() {
    skip_ws();
    const bool neg = accept('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    const long v = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    return neg ? -v : v;
  }

  std::string name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<SmoothMap> expr_list() {
    std::vector<SmoothMap> items;
    items.push_back(materialize(expr()));
    while (accept(',')) items.push_back(materialize(expr()));
    return items;
  }

  Item primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Item{number(), std::nullopt};
    if (c == '(') {
      ++pos_;
      auto items = expr_list();
      expect(')');
      if (items.size() == 1) return Item{std::nullopt, std::move(items.front())};
      return Item{std::nullopt, build([&] { return tuple(items); })};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t at = pos_;
      const std::string id = name();
      if (id == "x") return Item{std::nullopt, SmoothMap::identity(n_)};
      if (id.size() > 1 && id[0] == 'x' &&
          id.find_first_not_of("0123456789", 1) == std::string::npos) {
        const long i = std::strtol(id.c_str() + 1, nullptr, 10);
        if (i >= n_) {
          pos_ = at;
          fail("coordinate " + id + " out of range for dimension " + std::to_string(n_));
        }
        return Item{std::nullopt, SmoothMap::coordinate(n_, i)};
      }
      return Item{std::nullopt, call(id)};
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  SmoothMap call(const std::string& fn) {
    expect('(');
    SmoothMap result = build([&]() -> SmoothMap {
      if (fn == "sin") return sin(single());
      if (fn == "cos") return cos(single());
      if (fn == "exp") return exp(single());
      if (fn == "recip") return reciprocal(single());
      if (fn == "norm") return euclidean_norm(single());
      if (fn == "tuple") return tuple(expr_list());
      if (fn == "pow") {
        auto a = materialize(expr());
        expect(',');
        const long k = integer();
        return power(a, static_cast<int>(k));
      }
      if (fn == "guard") {
        auto a = materialize(expr());
        expect(',');
        return guard(a, signed_number());
      }
      if (fn == "const") {
        std::vector<double> vals{signed_number()};
        while (accept(',')) vals.push_back(signed_number());
        return SmoothMap::constant(n_, Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
      }
      if (fn == "proj") {
        auto a = materialize(expr());
        std::vector<Eigen::Index> idx;
        while (accept(',')) idx.push_back(integer());
        if (idx.empty()) fail("proj needs at least one index");
        return project(a, std::move(idx));
      }
      if (fn == "lin") {
        Matrix m = matrix();
        expect(',');
        return apply_linear(m, materialize(expr()));
      }
      fail("unknown function '" + fn + "'");
    });
    expect(')');
    return result;
  }

  SmoothMap single() { return materialize(expr()); }

  Matrix matrix() {
    expect('[');
    std::vector<std::vector<double>> rows;
    do {
      expect('[');
      std::vector<double> row{signed_number()};
      while (accept(',')) row.push_back(signed_number());
      expect(']');
      if (!rows.empty() && row.size() != rows.front().size()) fail("ragged matrix");
      rows.push_back(std::move(row));
    } while (accept(','));
    expect(']');
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
  }

  std::string_view text_;
  Eigen::Index n_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const SmoothMap& f) {
  std::string out;
  print(*f.body(), out);
  return out;
}

SmoothMap parse_expression(std::string_view text, Eigen::Index n) {
  if (n < 1) throw ParseError("expression", 0, "domain dimension must be >= 1");
  return Parser(text, n).parse();
}

}  // namespace functorad

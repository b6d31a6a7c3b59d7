#include "specsel/spectra/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "specsel/csv.hpp"
#include "specsel/error.hpp"

namespace specsel {

namespace {

enum class Tok { number, reflectance, plus, minus, star, slash, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  double value = 0.0;
  std::size_t pos = 0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::number: return "number";
    case Tok::reflectance: return "reflectance terminal";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::slash: return "'/'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::end: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, 0.0, pos_});
        return out;
      }
      const std::size_t start = pos_;
      const char c = text_[pos_];
      if (c == 'R') {
        ++pos_;
        if (pos_ >= text_.size() || !starts_number(text_[pos_]))
          throw ParseError(pos_, "expected wavelength after 'R'");
        out.push_back({Tok::reflectance, number(), start});
        continue;
      }
      if (starts_number(c)) {
        out.push_back({Tok::number, number(), start});
        continue;
      }
      if (auto op = utf8_operator()) {
        out.push_back({*op, 0.0, start});
        continue;
      }
      ++pos_;
      switch (c) {
        case '+': out.push_back({Tok::plus, 0.0, start}); break;
        case '-': out.push_back({Tok::minus, 0.0, start}); break;
        case '*': out.push_back({Tok::star, 0.0, start}); break;
        case '/': out.push_back({Tok::slash, 0.0, start}); break;
        case '(': out.push_back({Tok::lparen, 0.0, start}); break;
        case ')': out.push_back({Tok::rparen, 0.0, start}); break;
        default:
          throw ParseError(start, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  static bool starts_number(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  std::optional<Tok> utf8_operator() {
    static constexpr std::pair<std::string_view, Tok> table[] = {
        {"\xE2\x88\x92", Tok::minus},  // U+2212 minus sign
        {"\xC3\x97", Tok::star},       // U+00D7 multiplication sign
        {"\xC3\xB7", Tok::slash},      // U+00F7 division sign
    };
    for (const auto& [bytes, tok] : table) {
      if (text_.substr(pos_, bytes.size()) == bytes) {
        pos_ += bytes.size();
        return tok;
      }
    }
    return std::nullopt;
  }

  double number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    auto value = csv::parse_number(text_.substr(start, pos_ - start));
    if (!value) throw ParseError(start, "malformed number");
    return *value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(Expression::Kind k) {
  switch (k) {
    case Expression::Kind::add:
    case Expression::Kind::subtract: return 1;
    case Expression::Kind::multiply:
    case Expression::Kind::divide: return 2;
    case Expression::Kind::negate: return 3;
    default: return 4;
  }
}

}  // namespace

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Expression run() {
    if (tokens_.front().kind == Tok::end) throw ParseError(0, "empty expression");
    expr_.root_ = parse_sum();
    if (peek().kind != Tok::end)
      throw ParseError(peek().pos, "expected operator or end of input, found " + describe(peek()));
    return std::move(expr_);
  }

 private:
  const Token& peek() const { return tokens_[cursor_]; }
  const Token& take() { return tokens_[cursor_++]; }

  std::int32_t add(Expression::Node n) {
    expr_.nodes_.push_back(n);
    return static_cast<std::int32_t>(expr_.nodes_.size() - 1);
  }

  std::int32_t parse_sum() {
    std::int32_t lhs = parse_product();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      auto kind = take().kind == Tok::plus ? Expression::Kind::add : Expression::Kind::subtract;
      std::int32_t rhs = parse_product();
      lhs = add({kind, 0.0, lhs, rhs});
    }
    return lhs;
  }

  std::int32_t parse_product() {
    std::int32_t lhs = parse_unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      auto kind = take().kind == Tok::star ? Expression::Kind::multiply : Expression::Kind::divide;
      std::int32_t rhs = parse_unary();
      lhs = add({kind, 0.0, lhs, rhs});
    }
    return lhs;
  }

  std::int32_t parse_unary() {
    if (peek().kind == Tok::minus) {
      take();
      std::int32_t operand = parse_unary();
      return add({Expression::Kind::negate, 0.0, operand, -1});
    }
    return parse_primary();
  }

  std::int32_t parse_primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::number: return add({Expression::Kind::constant, t.value});
      case Tok::reflectance: return add({Expression::Kind::reflectance, t.value});
      case Tok::lparen: {
        std::int32_t inner = parse_sum();
        if (peek().kind != Tok::rparen)
          throw ParseError(peek().pos, "expected ')', found " + describe(peek()));
        take();
        return inner;
      }
      default:
        throw ParseError(t.pos, "expected operand, found " + describe(t));
    }
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  Expression expr_;
};

Expression Expression::parse(std::string_view text) { return ExpressionParser(text).run(); }

std::vector<double> Expression::terminal_wavelengths() const {
  std::vector<double> out;
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    if (id < 0) return;
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.kind == Kind::reflectance) out.push_back(n.value);
    self(self, n.lhs);
    self(self, n.rhs);
  };
  walk(walk, root_);
  return out;
}

std::vector<double> Expression::wavelengths() const {
  auto out = terminal_wavelengths();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Expression::to_string() const {
  auto render = [&](auto&& self, std::int32_t id) -> std::string {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
      case Kind::constant: return csv::format_number(n.value);
      case Kind::reflectance: return "R" + csv::format_number(n.value);
      case Kind::negate: {
        std::string inner = self(self, n.lhs);
        const auto& child = nodes_[static_cast<std::size_t>(n.lhs)];
        if (precedence(child.kind) < precedence(Kind::negate)) inner = "(" + inner + ")";
        return "-" + inner;
      }
      default: break;
    }
    const int p = precedence(n.kind);
    std::string lhs = self(self, n.lhs);
    std::string rhs = self(self, n.rhs);
    if (precedence(nodes_[static_cast<std::size_t>(n.lhs)].kind) < p) lhs = "(" + lhs + ")";
    if (precedence(nodes_[static_cast<std::size_t>(n.rhs)].kind) <= p) rhs = "(" + rhs + ")";
    const char* op = n.kind == Kind::add        ? " + "
                     : n.kind == Kind::subtract ? " - "
                     : n.kind == Kind::multiply ? " * "
                                                : " / ";
    return lhs + op + rhs;
  };
  return root_ < 0 ? std::string() : render(render, root_);
}

bool Expression::same_tree(const Expression& other) const {
  auto eq = [&](auto&& self, std::int32_t a, std::int32_t b) -> bool {
    if (a < 0 || b < 0) return a < 0 && b < 0;
    const Node& x = nodes_[static_cast<std::size_t>(a)];
    const Node& y = other.nodes_[static_cast<std::size_t>(b)];
    if (x.kind != y.kind) return false;
    if ((x.kind == Kind::constant || x.kind == Kind::reflectance) && x.value != y.value) return false;
    return self(self, x.lhs, y.lhs) && self(self, x.rhs, y.rhs);
  };
  return eq(eq, root_, other.root_);
}

BoundExpression::BoundExpression(Expression expression, const BandGrid& grid)
    : expression_(std::move(expression)), node_bands_(expression_.nodes().size(), 0) {
  const auto& nodes = expression_.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == Expression::Kind::reflectance)
      node_bands_[i] = nearest_band(grid, nodes[i].value);
  }
}

std::optional<double> BoundExpression::evaluate(std::span<const double> reflectance) const {
  return expression_.evaluate(
      [&](std::int32_t node) { return reflectance[node_bands_[static_cast<std::size_t>(node)]]; });
}

}  // namespace specsel

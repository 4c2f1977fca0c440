#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "carlitz/cauchy.hpp"

namespace carlitz {

// Parse trees ---------------------------------------------------------------------

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Exponent as written: num / den or num / q^qexp (qexp >= 0 marks the q form).
struct ExponentText {
  std::int64_t num = 1;
  std::int64_t den = 1;
  int qexp = -1;
  Span span;

  bool plain_integer() const { return den == 1 && qexp < 0; }
  friend bool operator==(const ExponentText& a, const ExponentText& b) {
    return a.num == b.num && a.den == b.den && a.qexp == b.qexp;
  }
  std::string to_string() const {
    if (plain_integer() && num >= 0) return std::to_string(num);
    std::string s = "(" + std::to_string(num);
    if (qexp >= 0) s += "/q^" + std::to_string(qexp);
    else if (den != 1) s += "/" + std::to_string(den);
    return s + ")";
  }
  Rational value(std::int64_t q) const {
    if (qexp >= 0) return Rational::q_adic(num, qexp, q);
    return Rational(num, den);
  }
};

/// Series literals are integers, `x`, `g` and `O(x^e)`; generators are
/// `tau`, `d`, `deltaJ`.
struct ParseNode {
  enum class Kind { SeriesLiteral, Generator, Product, Sum, Power, Paren };
  Kind kind = Kind::SeriesLiteral;
  std::string text;
  ExponentText exponent;            // Power, and the O(...) literal
  std::vector<ParseNode> children;
  std::vector<bool> negated;        // Sum only
  Span span;

  /// Structural equality, spans ignored.
  friend bool operator==(const ParseNode& a, const ParseNode& b) {
    return a.kind == b.kind && a.text == b.text && a.exponent == b.exponent && a.children == b.children &&
           a.negated == b.negated;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::SeriesLiteral:
        if (text == "O") return "O(x" + (exponent.plain_integer() && exponent.num == 1 ? std::string() : "^" + exponent.to_string()) + ")";
        return text;
      case Kind::Generator: return text;
      case Kind::Paren: return "(" + children[0].to_string() + ")";
      case Kind::Power: return children[0].to_string() + "^" + exponent.to_string();
      case Kind::Product: {
        std::string s;
        for (std::size_t i = 0; i < children.size(); ++i) s += (i ? "*" : "") + children[i].to_string();
        return s;
      }
      case Kind::Sum: {
        std::string s;
        for (std::size_t i = 0; i < children.size(); ++i) {
          if (i == 0) s += negated[i] ? "-" : "";
          else s += negated[i] ? " - " : " + ";
          s += children[i].to_string();
        }
        return s;
      }
    }
    return {};
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ParseNode parse() {
    skip();
    if (pos_ >= src_.size()) fail("empty expression", pos_, pos_);
    ParseNode n = sum();
    skip();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'", pos_, pos_ + 1);
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t b, std::size_t e) const { throw SyntaxError(what, b, e); }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'", pos_, std::min(pos_ + 1, src_.size()));
  }
  std::int64_t integer() {
    skip();
    const std::size_t b = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (b == pos_) fail("expected an integer", b, std::min(b + 1, src_.size()));
    if (pos_ - b > 15) fail("integer too large", b, pos_);
    return std::stoll(std::string(src_.substr(b, pos_ - b)));
  }
  std::string ident() {
    skip();
    const std::size_t b = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(b, pos_ - b));
  }

  ParseNode sum() {
    ParseNode s;
    s.kind = ParseNode::Kind::Sum;
    s.span.begin = (skip(), pos_);
    bool neg = accept('-');
    for (;;) {
      s.children.push_back(product());
      s.negated.push_back(neg);
      if (accept('+')) neg = false;
      else if (accept('-')) neg = true;
      else break;
    }
    s.span.end = pos_;
    if (s.children.size() == 1 && !s.negated[0]) return std::move(s.children[0]);
    return s;
  }

  ParseNode product() {
    ParseNode p;
    p.kind = ParseNode::Kind::Product;
    p.span.begin = (skip(), pos_);
    p.children.push_back(power());
    while (accept('*')) p.children.push_back(power());
    p.span.end = pos_;
    if (p.children.size() == 1) return std::move(p.children[0]);
    return p;
  }

  ParseNode power() {
    ParseNode base = atom();
    if (!accept('^')) return base;
    ParseNode p;
    p.kind = ParseNode::Kind::Power;
    p.span.begin = base.span.begin;
    p.exponent = exponent();
    p.children.push_back(std::move(base));
    p.span.end = pos_;
    if (peek('^')) fail("chained powers need parentheses", pos_, pos_ + 1);
    return p;
  }

  ExponentText exponent() {
    ExponentText e;
    e.span.begin = (skip(), pos_);
    if (accept('(')) {
      const bool neg = accept('-');
      e.num = integer() * (neg ? -1 : 1);
      if (accept('/')) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == 'q') {
          ++pos_;
          e.qexp = 1;
          if (accept('^')) e.qexp = static_cast<int>(integer());
        } else {
          e.den = integer();
          if (e.den == 0) fail("zero denominator", e.span.begin, pos_);
        }
      }
      expect(')');
    } else {
      const bool neg = accept('-');
      e.num = integer() * (neg ? -1 : 1);
    }
    e.span.end = pos_;
    return e;
  }

  ParseNode atom() {
    skip();
    ParseNode n;
    n.span.begin = pos_;
    if (pos_ >= src_.size()) fail("unexpected end of input", pos_, pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      n.kind = ParseNode::Kind::Paren;
      n.children.push_back(sum());
      expect(')');
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      n.text = std::to_string(integer());
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string id = ident();
      if (id == "x" || id == "g") {
        n.text = id;
      } else if (id == "O") {
        n.text = "O";
        expect('(');
        skip();
        const std::size_t xb = pos_;
        if (ident() != "x") fail("O(...) takes a power of x", xb, pos_);
        n.exponent = ExponentText{};
        if (accept('^')) n.exponent = exponent();
        expect(')');
      } else if (id == "tau" || id == "d" || (id.size() > 5 && id.rfind("delta", 0) == 0 &&
                                               id.find_first_not_of("0123456789", 5) == std::string::npos)) {
        n.kind = ParseNode::Kind::Generator;
        n.text = id;
      } else {
        fail("unknown identifier '" + id + "'", n.span.begin, pos_);
      }
    } else {
      fail("unexpected '" + std::string(1, c) + "'", pos_, pos_ + 1);
    }
    n.span.end = pos_;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline Rational exponent_value(const ExponentText& e, std::int64_t q) {
  if (e.qexp < 0 && e.den != 1 && Rational(1, e.den).q_dexp(q) < 0)
    throw SyntaxError("exponent denominator " + std::to_string(e.den) + " is not a power of q", e.span.begin, e.span.end);
  return e.value(q);
}

inline PerfSeries lower_series(const ParseNode& n, const FieldPtr& f) {
  using K = ParseNode::Kind;
  switch (n.kind) {
    case K::SeriesLiteral:
      if (n.text == "x") return PerfSeries::x(f);
      if (n.text == "g") return PerfSeries::constant(f, f->generator());
      if (n.text == "O") return PerfSeries::big_oh(f, exponent_value(n.exponent, f->q()));
      return PerfSeries::from_int(f, std::stoll(n.text));
    case K::Generator:
      throw SyntaxError("operator generator '" + n.text + "' in a series", n.span.begin, n.span.end);
    case K::Paren: return lower_series(n.children[0], f);
    case K::Power: {
      const ParseNode& base = n.children[0];
      const Rational e = exponent_value(n.exponent, f->q());
      if (base.kind == K::SeriesLiteral && base.text == "x") return PerfSeries::monomial(f, e);
      if (!e.is_integer()) throw SyntaxError("fractional power of a non-monomial", n.span.begin, n.span.end);
      if (base.kind == K::SeriesLiteral && base.text == "g")
        return PerfSeries::constant(f, f->gen_pow(((e.num() % (f->order() - 1)) + (f->order() - 1)) % (f->order() - 1)));
      return lower_series(base, f).pow(e.num());
    }
    case K::Product: {
      PerfSeries r = lower_series(n.children[0], f);
      for (std::size_t i = 1; i < n.children.size(); ++i) r = r * lower_series(n.children[i], f);
      return r;
    }
    case K::Sum: {
      PerfSeries r = PerfSeries::zero(f);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        PerfSeries c = lower_series(n.children[i], f);
        r = n.negated[i] ? r - c : r + c;
      }
      return r;
    }
  }
  return PerfSeries::zero(f);
}

inline OperatorSum lower_operator(const ParseNode& n, const FieldPtr& f, int nvars) {
  using K = ParseNode::Kind;
  switch (n.kind) {
    case K::SeriesLiteral: return OperatorSum::scalar(lower_series(n, f), nvars);
    case K::Generator: {
      if (n.text == "tau") return OperatorSum::generator(f, nvars, letter::tau);
      if (n.text == "d") return OperatorSum::generator(f, nvars, letter::d);
      const int j = std::stoi(n.text.substr(5));
      if (j < 1 || j > nvars)
        throw SyntaxError("generator '" + n.text + "' out of range for n = " + std::to_string(nvars), n.span.begin, n.span.end);
      return OperatorSum::generator(f, nvars, letter::delta(j));
    }
    case K::Paren: return lower_operator(n.children[0], f, nvars);
    case K::Power: {
      const ParseNode& base = n.children[0];
      if (base.kind == K::SeriesLiteral) return OperatorSum::scalar(lower_series(n, f), nvars);
      if (!n.exponent.plain_integer() || n.exponent.num < 0)
        throw SyntaxError("operator powers must be non-negative integers", n.exponent.span.begin, n.exponent.span.end);
      OperatorSum b = lower_operator(base, f, nvars);
      OperatorSum r = OperatorSum::scalar(PerfSeries::one(f), nvars);
      for (std::int64_t k = 0; k < n.exponent.num; ++k) r = r * b;
      return r;
    }
    case K::Product: {
      OperatorSum r = lower_operator(n.children[0], f, nvars);
      for (std::size_t i = 1; i < n.children.size(); ++i) r = r * lower_operator(n.children[i], f, nvars);
      return r;
    }
    case K::Sum: {
      OperatorSum r = OperatorSum::zero(f, nvars);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        OperatorSum c = lower_operator(n.children[i], f, nvars);
        r = n.negated[i] ? r - c : r + c;
      }
      return r;
    }
  }
  return OperatorSum::zero(f, nvars);
}

}  // namespace detail

inline ParseNode parse_tree(std::string_view text) { return detail::Parser(text).parse(); }

inline PerfSeries parse_series(std::string_view text, const FieldPtr& f) {
  return detail::lower_series(parse_tree(text), f);
}

inline OperatorSum parse_operator(std::string_view text, const FieldPtr& f, int nvars) {
  return detail::lower_operator(parse_tree(text), f, nvars);
}

// Printing ---------------------------------------------------------------------------

inline std::string letter_name(int l) {
  if (l == letter::tau) return "tau";
  if (l == letter::d) return "d";
  return "delta" + std::to_string(letter::delta_index(l));
}

/// `(c)*tau^l*d^mu*delta1^i ...` joined by " + "; unit coefficients are
/// omitted in front of a non-empty word. "0" for the zero operator.
inline std::string to_string(const NormalForm& a) {
  if (a.terms.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : a.terms) {
    std::vector<std::pair<int, int>> runs;
    for (int l : a.word_of(k)) {
      if (!runs.empty() && runs.back().first == l) ++runs.back().second;
      else runs.emplace_back(l, 1);
    }
    std::string term;
    const bool unit = c.identical(PerfSeries::one(a.field));
    if (!unit || runs.empty()) term = "(" + c.to_string() + ")";
    for (const auto& [l, e] : runs) {
      if (!term.empty()) term += "*";
      term += letter_name(l) + (e > 1 ? "^" + std::to_string(e) : "");
    }
    out += (out.empty() ? "" : " + ") + term;
  }
  return out;
}

inline std::string modulus_string(const std::vector<int>& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s;
}

inline std::vector<int> parse_modulus(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParameterError("bad modulus entry '" + item + "'");
    }
  }
  return out;
}

inline std::string field_header(const Field& f) {
  const auto& p = f.params();
  return "p=" + std::to_string(p.p) + " v=" + std::to_string(p.v) + " m=" + std::to_string(p.m) +
         " modulus=" + modulus_string(p.modulus) + " wp=" + p.working_precision.to_string();
}

/// Header line, one `m i_1 .. i_n : series` line per stored slot, then `end`.
inline std::string serialize(const MultiFunction& u) {
  std::ostringstream os;
  os << "multifunction " << field_header(*u.field()) << " n=" << u.n() << " truncM=" << u.trunc_m()
     << " truncI=" << u.trunc_i() << "\n";
  for (const auto& [idx, c] : u.coefficients()) {
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? " " : "") << idx[k];
    os << " : " << c << "\n";
  }
  os << "end\n";
  return os.str();
}

namespace detail {

inline std::map<std::string, std::string> key_values(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

inline int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("bad integer for " + what + ": '" + s + "'");
  }
}

inline Rational to_rational(const std::string& s, const std::string& what) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(to_int(s, what));
  return Rational(to_int(s.substr(0, slash), what), to_int(s.substr(slash + 1), what));
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Field from `p= v= m= modulus= wp=` or `q= m=` keys; missing keys default
/// to q = 2, m = 1 and the shipped modulus.
inline FieldPtr field_from_keys(const std::map<std::string, std::string>& kv) {
  FieldParams fp;
  Rational wp(48);
  if (auto it = kv.find("wp"); it != kv.end()) wp = detail::to_rational(it->second, "wp");
  int m = 1;
  if (auto it = kv.find("m"); it != kv.end()) m = detail::to_int(it->second, "m");
  if (auto it = kv.find("p"); it != kv.end()) {
    fp.p = detail::to_int(it->second, "p");
    fp.v = kv.count("v") ? detail::to_int(kv.at("v"), "v") : 1;
    fp.m = m;
    fp.working_precision = wp;
    if (auto mo = kv.find("modulus"); mo != kv.end()) {
      fp.modulus = parse_modulus(mo->second);
      return Field::make(std::move(fp));
    }
    return Field::for_q(fp.q(), m, wp);
  }
  std::int64_t q = 2;
  if (auto it = kv.find("q"); it != kv.end()) q = detail::to_int(it->second, "q");
  if (auto mo = kv.find("modulus"); mo != kv.end()) {
    std::tie(fp.p, fp.v) = Field::factor_prime_power(q);
    fp.m = m;
    fp.modulus = parse_modulus(mo->second);
    fp.working_precision = wp;
    return Field::make(std::move(fp));
  }
  return Field::for_q(q, m, wp);
}

inline MultiFunction parse_multifunction(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && detail::trim(line).empty()) {}
  line = detail::trim(line);
  if (line.rfind("multifunction", 0) != 0) throw ParameterError("expected a 'multifunction' header");
  const auto kv = detail::key_values(line);
  for (const char* k : {"n", "truncM", "truncI"})
    if (!kv.count(k)) throw ParameterError(std::string("multifunction header lacks ") + k);
  const FieldPtr f = field_from_keys(kv);
  MultiFunction u(f, detail::to_int(kv.at("n"), "n"), detail::to_int(kv.at("truncM"), "truncM"),
                  detail::to_int(kv.at("truncI"), "truncI"));
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == "end") return u;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParameterError("slot line without ':' : " + line);
    std::istringstream is(line.substr(0, colon));
    SlotIndex idx;
    std::string tok;
    while (is >> tok) idx.push_back(detail::to_int(tok, "slot index"));
    if (static_cast<int>(idx.size()) != u.n() + 1) throw ParameterError("slot arity mismatch: " + line);
    u.set(idx, parse_series(line.substr(colon + 1), f));
  }
  throw ParameterError("multifunction without 'end'");
}

inline MultiFunction parse_multifunction(const std::string& text) {
  std::istringstream is(text);
  return parse_multifunction(is);
}

// Problem and parameter files ---------------------------------------------------------

/// Cauchy problem file:
///   field q=3            (or p= v= m= modulus=)
///   n = 1
///   P 1 : 1              one line per monomial: exponents, then coefficient
///   P 0 : x
///   Q 1 : 1
///   init 0 : 1           c_{0,i}: indices, then value
///   truncM = 5
///   truncI = 5
struct CauchyProblem {
  FieldPtr field;
  int n = 1;
  std::vector<std::pair<std::vector<int>, std::string>> p_terms, q_terms, init_terms;
  int trunc_m = 5;
  int trunc_i = 5;
  std::optional<int> imax;

  EvolutionEquation equation() const {
    MultiPoly P(field, n), Q(field, n);
    for (const auto& [e, s] : p_terms) P.add_term(e, parse_series(s, field));
    for (const auto& [e, s] : q_terms) Q.add_term(e, parse_series(s, field));
    return EvolutionEquation(std::move(P), std::move(Q));
  }
  InitialData initial_data() const {
    InitialData d;
    for (const auto& [i, s] : init_terms) d.insert_or_assign(i, parse_series(s, field));
    return d;
  }
};

namespace detail {

/// Splits "key rest" / "key = rest" lines; comments start with '#'.
inline std::vector<std::pair<std::string, std::string>> directive_lines(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t k = 0;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k])) && line[k] != '=') ++k;
    std::string key = line.substr(0, k), rest = trim(line.substr(k));
    if (!rest.empty() && rest[0] == '=') rest = trim(rest.substr(1));
    out.emplace_back(key, rest);
  }
  return out;
}

inline std::pair<std::vector<int>, std::string> indexed_value(const std::string& rest, const std::string& key) {
  const auto colon = rest.find(':');
  if (colon == std::string::npos) throw ParameterError("'" + key + "' line needs 'indices : value'");
  std::vector<int> idx;
  std::istringstream is(rest.substr(0, colon));
  std::string tok;
  while (is >> tok) idx.push_back(to_int(tok, key + " index"));
  return {idx, trim(rest.substr(colon + 1))};
}

}  // namespace detail

inline CauchyProblem parse_cauchy_problem(std::istream& in, FieldPtr default_field) {
  CauchyProblem pr;
  pr.field = std::move(default_field);
  for (const auto& [key, rest] : detail::directive_lines(in)) {
    if (key == "field") pr.field = field_from_keys(detail::key_values(rest));
    else if (key == "n") pr.n = detail::to_int(rest, "n");
    else if (key == "P") pr.p_terms.push_back(detail::indexed_value(rest, key));
    else if (key == "Q") pr.q_terms.push_back(detail::indexed_value(rest, key));
    else if (key == "init") pr.init_terms.push_back(detail::indexed_value(rest, key));
    else if (key == "truncM") pr.trunc_m = detail::to_int(rest, "truncM");
    else if (key == "truncI") pr.trunc_i = detail::to_int(rest, "truncI");
    else if (key == "imax") pr.imax = detail::to_int(rest, "imax");
    else throw ParameterError("unknown problem-file key '" + key + "'");
  }
  return pr;
}

/// Hypergeometric parameter file:
///   field q=2
///   a = x^2 + 1          repeated for each upper parameter
///   b = x^3              repeated for each lower parameter
///   alpha = 2 / beta = 3 integer Thakur parameters instead of a / b
///   z = x^4
///   M = 5
struct HyperProblem {
  FieldPtr field;
  std::vector<std::string> a, b;
  std::vector<int> alphas, betas;
  std::string z;
  int M = 5;
};

inline HyperProblem parse_hyper_problem(std::istream& in, FieldPtr default_field) {
  HyperProblem pr;
  pr.field = std::move(default_field);
  for (const auto& [key, rest] : detail::directive_lines(in)) {
    if (key == "field") pr.field = field_from_keys(detail::key_values(rest));
    else if (key == "a") pr.a.push_back(rest);
    else if (key == "b") pr.b.push_back(rest);
    else if (key == "alpha") pr.alphas.push_back(detail::to_int(rest, "alpha"));
    else if (key == "beta") pr.betas.push_back(detail::to_int(rest, "beta"));
    else if (key == "z") pr.z = rest;
    else if (key == "M") pr.M = detail::to_int(rest, "M");
    else throw ParameterError("unknown parameter-file key '" + key + "'");
  }
  return pr;
}

}  // namespace carlitz

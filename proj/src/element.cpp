#include "ordmet/element.hpp"

#include <cctype>

namespace ordmet {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw std::invalid_argument("unbalanced parentheses in '" + std::string(s) + "'");
    if (s[i] == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced parentheses in '" + std::string(s) + "'");
  parts.push_back(trim(s.substr(start)));
  return parts;
}

namespace {

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  if (num.front() == '+') num.remove_prefix(1);
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

Rational pow(const Rational& base, unsigned long exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Element Element::unit(std::size_t dim, std::size_t axis) {
  Element e = zero(dim);
  e.coords_.at(axis) = 1;
  return e;
}

bool Element::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

void require_same_dim(const Element& a, const Element& b) {
  if (a.dim() != b.dim())
    throw DomainError("dimension mismatch: " + to_string(a) + " vs " + to_string(b));
}

Element Element::operator+(const Element& other) const {
  require_same_dim(*this, other);
  std::vector<Rational> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = coords_[i] + other.coords_[i];
  return Element(std::move(out));
}

Element Element::operator-(const Element& other) const {
  require_same_dim(*this, other);
  std::vector<Rational> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = coords_[i] - other.coords_[i];
  return Element(std::move(out));
}

Element Element::operator-() const {
  std::vector<Rational> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = -coords_[i];
  return Element(std::move(out));
}

Element Element::scaled(const Rational& r) const {
  std::vector<Rational> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = r * coords_[i];
  return Element(std::move(out));
}

std::strong_ordering Element::operator<=>(const Element& other) const {
  if (auto c = dim() <=> other.dim(); c != 0) return c;
  for (std::size_t i = 0; i < dim(); ++i) {
    const int s = cmp(coords_[i], other.coords_[i]);
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string to_string(const Element& e) {
  if (e.dim() == 1) return to_string(e[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < e.dim(); ++i) {
    if (i) out += ", ";
    out += to_string(e[i]);
  }
  return out + ")";
}

Element parse_element(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty element");
  if (text.front() != '(') return Element{parse_rational(text)};
  if (text.back() != ')') throw std::invalid_argument("unterminated tuple '" + std::string(text) + "'");
  text = text.substr(1, text.size() - 2);
  std::vector<Rational> coords;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) coords.push_back(parse_rational(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      token += c;
  }
  flush();
  if (coords.empty()) throw std::invalid_argument("empty tuple");
  return Element(std::move(coords));
}

std::vector<Element> parse_element_list(std::string_view text) {
  std::vector<Element> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',' || text[i] == ';') {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (text[i] == '(') {
      j = text.find(')', i);
      if (j == std::string_view::npos) throw std::invalid_argument("unterminated tuple in list");
      ++j;
    } else {
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',' &&
             text[j] != ';')
        ++j;
    }
    out.push_back(parse_element(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

}  // namespace ordmet

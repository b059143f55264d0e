#include "ordmet/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace ordmet {

Rational Term::basis(std::uint64_t n) const {
  if (n == 0) throw std::out_of_range("sequences are indexed from n = 1");
  switch (kind) {
    case TermKind::constant: return 1;
    case TermKind::harmonic: {
      Rational r(mpz_class(1), mpz_class(std::to_string(n)));
      return r;
    }
    case TermKind::inverse_square: {
      mpz_class m(std::to_string(n));
      return Rational(mpz_class(1), m * m);
    }
    case TermKind::geometric: return pow(ratio, n);
  }
  return 0;
}

namespace {

int kind_rank(TermKind k) { return static_cast<int>(k); }

bool same_basis(const Term& a, const Term& b) {
  return a.kind == b.kind && (a.kind != TermKind::geometric || a.ratio == b.ratio);
}

std::vector<Term> normalize(std::vector<Term> terms) {
  if (terms.empty()) throw std::invalid_argument("closed form needs at least one term");
  const std::size_t dim = terms.front().coeff.dim();
  for (const auto& t : terms) {
    if (t.coeff.dim() != dim) throw DomainError("closed form terms differ in dimension");
    if (t.kind == TermKind::geometric && (t.ratio <= 0 || t.ratio >= 1))
      throw std::invalid_argument("geometric ratio must lie in (0, 1), got " + to_string(t.ratio));
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.kind != b.kind) return kind_rank(a.kind) < kind_rank(b.kind);
    return a.kind == TermKind::geometric && a.ratio > b.ratio;
  });
  std::vector<Term> merged;
  for (auto& t : terms) {
    if (!merged.empty() && same_basis(merged.back(), t))
      merged.back().coeff = merged.back().coeff + t.coeff;
    else
      merged.push_back(std::move(t));
  }
  std::vector<Term> out;
  for (auto& t : merged)
    if (!t.coeff.is_zero()) out.push_back(std::move(t));
  if (out.empty()) out.push_back(Term{TermKind::constant, Element::zero(dim)});
  return out;
}

}  // namespace

ClosedForm::ClosedForm(std::vector<Term> terms) : terms_(normalize(std::move(terms))) {}

ClosedForm ClosedForm::constant(Element c) { return ClosedForm({Term{TermKind::constant, std::move(c)}}); }
ClosedForm ClosedForm::harmonic(Element c) { return ClosedForm({Term{TermKind::harmonic, std::move(c)}}); }
ClosedForm ClosedForm::inverse_square(Element c) {
  return ClosedForm({Term{TermKind::inverse_square, std::move(c)}});
}
ClosedForm ClosedForm::geometric(Rational ratio, Element c) {
  return ClosedForm({Term{TermKind::geometric, std::move(c), std::move(ratio)}});
}

std::size_t ClosedForm::dim() const { return terms_.empty() ? 0 : terms_.front().coeff.dim(); }

Element ClosedForm::at(std::uint64_t n) const {
  Element sum = Element::zero(dim());
  for (const auto& t : terms_) sum = sum + t.coeff.scaled(t.basis(n));
  return sum;
}

Element ClosedForm::limit() const {
  Element sum = Element::zero(dim());
  for (const auto& t : terms_)
    if (t.kind == TermKind::constant) sum = sum + t.coeff;
  return sum;
}

bool ClosedForm::nonincreasing() const {
  for (const auto& t : terms_) {
    if (t.kind == TermKind::constant) continue;
    for (const auto& c : t.coeff.coords())
      if (c < 0) return false;
  }
  return true;
}

bool ClosedForm::has_geometric() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.kind == TermKind::geometric; });
}

namespace {

// Sign shared by the selected coefficients of coordinate i: +1, -1, 0 when
// all are zero, nullopt when mixed.
std::optional<int> shared_sign(const std::vector<Term>& terms, std::size_t i, bool include_constant) {
  int sign = 0;
  for (const auto& t : terms) {
    if (t.kind == TermKind::constant && !include_constant) continue;
    const int s = sgn(t.coeff[i]);
    if (s == 0) continue;
    if (sign != 0 && s != sign) return std::nullopt;
    sign = s;
  }
  return sign;
}

}  // namespace

std::optional<ClosedForm> ClosedForm::abs_value() const {
  std::vector<int> signs(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    auto s = shared_sign(terms_, i, true);
    if (!s) return std::nullopt;
    signs[i] = *s;
  }
  std::vector<Term> out;
  for (const auto& t : terms_) {
    std::vector<Rational> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = signs[i] < 0 ? Rational(-t.coeff[i]) : t.coeff[i];
    out.push_back(Term{t.kind, Element(std::move(c)), t.ratio});
  }
  return ClosedForm(std::move(out));
}

bool ClosedForm::coordinatewise_monotone() const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (!shared_sign(terms_, i, false)) return false;
  return true;
}

Element ClosedForm::tail_bound(std::uint64_t n) const {
  Element sum = Element::zero(dim());
  for (const auto& t : terms_) {
    if (t.kind == TermKind::constant) continue;
    std::vector<Rational> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = abs(t.coeff[i]);
    sum = sum + Element(std::move(c)).scaled(t.basis(n));
  }
  return sum;
}

ClosedForm ClosedForm::operator+(const ClosedForm& other) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return ClosedForm(std::move(all));
}

ClosedForm ClosedForm::operator-(const ClosedForm& other) const { return *this + other.scaled(-1); }

ClosedForm ClosedForm::scaled(const Rational& r) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff = t.coeff.scaled(r);
  return ClosedForm(std::move(out));
}

std::string to_string(const ClosedForm& f) {
  std::string out;
  for (const auto& t : f.terms()) {
    if (!out.empty()) out += " + ";
    switch (t.kind) {
      case TermKind::constant: out += "const(" + to_string(t.coeff) + ")"; break;
      case TermKind::harmonic: out += "harm(" + to_string(t.coeff) + ")"; break;
      case TermKind::inverse_square: out += "harm2(" + to_string(t.coeff) + ")"; break;
      case TermKind::geometric: out += "geom(" + to_string(t.ratio) + ", " + to_string(t.coeff) + ")"; break;
    }
  }
  return out;
}


ClosedForm parse_closed_form(std::string_view text) {
  std::vector<Term> terms;
  for (auto part : split_top_level(text, '+')) {
    const auto open = part.find('(');
    if (open == std::string_view::npos || part.back() != ')')
      throw std::invalid_argument("malformed sequence term '" + std::string(part) + "'");
    const auto name = trim(part.substr(0, open));
    const auto args = split_top_level(part.substr(open + 1, part.size() - open - 2), ',');
    if (name == "geom") {
      if (args.size() != 2) throw std::invalid_argument("geom(ratio, coeff) takes two arguments");
      terms.push_back(Term{TermKind::geometric, parse_element(args[1]), parse_rational(args[0])});
      continue;
    }
    if (args.size() != 1) throw std::invalid_argument("term '" + std::string(name) + "' takes one argument");
    const Element c = parse_element(args[0]);
    if (name == "const")
      terms.push_back(Term{TermKind::constant, c});
    else if (name == "harm")
      terms.push_back(Term{TermKind::harmonic, c});
    else if (name == "harm2")
      terms.push_back(Term{TermKind::inverse_square, c});
    else
      throw std::invalid_argument("unknown sequence family '" + std::string(name) + "'");
  }
  return ClosedForm(std::move(terms));
}

Sequence::Sequence(std::vector<Element> prefix) : repr_(std::move(prefix)) {
  const auto& p = std::get<std::vector<Element>>(repr_);
  if (p.empty()) throw std::invalid_argument("explicit sequence needs at least one term");
  for (const auto& e : p)
    if (e.dim() != p.front().dim()) throw DomainError("explicit sequence terms differ in dimension");
}

std::optional<std::uint64_t> Sequence::length() const {
  if (const auto* p = std::get_if<std::vector<Element>>(&repr_)) return p->size();
  return std::nullopt;
}

std::size_t Sequence::dim() const {
  if (const auto* f = closed_form()) return f->dim();
  return std::get<std::vector<Element>>(repr_).front().dim();
}

Element Sequence::at(std::uint64_t n) const {
  if (const auto* f = closed_form()) return f->at(n);
  const auto& p = std::get<std::vector<Element>>(repr_);
  if (n == 0 || n > p.size()) throw std::out_of_range("index " + std::to_string(n) + " outside explicit prefix");
  return p[n - 1];
}

std::vector<Element> Sequence::materialize(std::uint64_t n) const {
  if (auto len = length()) n = std::min(n, *len);
  std::vector<Element> out;
  out.reserve(n);
  for (std::uint64_t k = 1; k <= n; ++k) out.push_back(at(k));
  return out;
}

}  // namespace ordmet

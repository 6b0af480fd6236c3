#pragma once

// Complex-weighted sums of multi-qubit Pauli strings.
//
// A PauliString stores one 2-bit code per qubit, packed into an x-mask and a
// z-mask: I = (0,0), X = (1,0), Y = (1,1), Z = (0,1). Qubit 0 is the least
// significant bit of both masks and of the computational basis index.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lgap/errors.hpp"

namespace lgap {

using complex = std::complex<double>;

inline constexpr double kDropTol = 1e-12;
inline constexpr int kDenseLimit = 12;
inline constexpr int kMaxQubits = 64;

class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(int qubits) : qubits_(qubits) {
    if (qubits < 0 || qubits > kMaxQubits)
      throw capacity_error("PauliString: qubit count " + std::to_string(qubits) +
                           " outside [0, 64]");
  }

  PauliString(int qubits, std::uint64_t x, std::uint64_t z) : PauliString(qubits) {
    const std::uint64_t mask = qubits == 64 ? ~0ULL : ((1ULL << qubits) - 1);
    if ((x | z) & ~mask) throw dimension_error("PauliString: mask bits beyond qubit count");
    x_ = x;
    z_ = z;
  }

  /// Parses one label character per qubit, leftmost character = qubit 0.
  static PauliString from_label(std::string_view label) {
    PauliString p(static_cast<int>(label.size()));
    for (std::size_t q = 0; q < label.size(); ++q) p.set(static_cast<int>(q), label[q]);
    return p;
  }

  static PauliString single(int qubits, int site, char axis) {
    PauliString p(qubits);
    p.set(site, axis);
    return p;
  }

  int qubit_count() const { return qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  /// 'I', 'X', 'Y' or 'Z' for the given qubit.
  char axis(int q) const {
    const bool x = (x_ >> q) & 1U;
    const bool z = (z_ >> q) & 1U;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }

  void set(int q, char axis) {
    if (q < 0 || q >= qubits_) throw dimension_error("PauliString: site out of range");
    const std::uint64_t bit = 1ULL << q;
    x_ &= ~bit;
    z_ &= ~bit;
    switch (axis) {
      case 'I': break;
      case 'X': x_ |= bit; break;
      case 'Y': x_ |= bit; z_ |= bit; break;
      case 'Z': z_ |= bit; break;
      default:
        throw domain_error(std::string("PauliString: unknown axis '") + axis + "'");
    }
  }

  int y_count() const { return std::popcount(x_ & z_); }
  bool is_identity() const { return (x_ | z_) == 0; }

  std::string label() const {
    std::string s(static_cast<std::size_t>(qubits_), 'I');
    for (int q = 0; q < qubits_; ++q) s[static_cast<std::size_t>(q)] = axis(q);
    return s;
  }

  /// Places `high` on qubits [qubit_count(), qubit_count() + high.qubit_count()).
  PauliString tensor(const PauliString& high) const {
    return PauliString(qubits_ + high.qubits_, x_ | (high.x_ << qubits_),
                       z_ | (high.z_ << qubits_));
  }

  /// Action on a basis state: P|b> = phase(b) |b ^ x_mask>.
  complex basis_phase(std::uint64_t b) const {
    static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int sign_flips = std::popcount(b & z_);
    const complex ph = kIPow[y_count() & 3];
    return (sign_flips & 1) ? -ph : ph;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.qubits_ == b.qubits_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  /// Lexicographic on the label with I < X < Y < Z, qubit 0 most significant.
  friend bool operator<(const PauliString& a, const PauliString& b) {
    if (a.qubits_ != b.qubits_) return a.qubits_ < b.qubits_;
    for (int q = 0; q < a.qubits_; ++q) {
      const int ca = code(a.axis(q));
      const int cb = code(b.axis(q));
      if (ca != cb) return ca < cb;
    }
    return false;
  }

 private:
  static int code(char axis) {
    switch (axis) {
      case 'X': return 1;
      case 'Y': return 2;
      case 'Z': return 3;
      default: return 0;
    }
  }

  int qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Product of two Pauli strings: P * Q = phase * R with phase in {1, -1, i, -i}.
inline std::pair<complex, PauliString> multiply(const PauliString& p, const PauliString& q) {
  if (p.qubit_count() != q.qubit_count())
    throw dimension_error("multiply: qubit counts differ (" + std::to_string(p.qubit_count()) +
                          " vs " + std::to_string(q.qubit_count()) + ")");
  // Power of i accumulated from the single-qubit products XY = iZ, YZ = iX, ZX = iY
  // and their reverses.
  int ipow = 0;
  for (int k = 0; k < p.qubit_count(); ++k) {
    const char a = p.axis(k);
    const char b = q.axis(k);
    if (a == 'I' || b == 'I' || a == b) continue;
    const bool cyclic = (a == 'X' && b == 'Y') || (a == 'Y' && b == 'Z') || (a == 'Z' && b == 'X');
    ipow += cyclic ? 1 : 3;
  }
  static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {kIPow[ipow & 3],
          PauliString(p.qubit_count(), p.x_mask() ^ q.x_mask(), p.z_mask() ^ q.z_mask())};
}

class PauliSum {
 public:
  struct Term {
    complex coeff;
    PauliString string;
  };

  PauliSum() = default;
  explicit PauliSum(int qubits) : qubits_(qubits) {
    if (qubits < 0 || qubits > kMaxQubits)
      throw capacity_error("PauliSum: qubit count outside [0, 64]");
  }
  PauliSum(int qubits, std::vector<Term> terms) : PauliSum(qubits) {
    for (auto& t : terms) add(t.coeff, t.string);
  }

  static PauliSum identity(int qubits, complex coeff = 1.0) {
    PauliSum s(qubits);
    s.add(coeff, PauliString(qubits));
    return s;
  }

  static PauliSum single(int qubits, int site, char axis, complex coeff = 1.0) {
    PauliSum s(qubits);
    s.add(coeff, PauliString::single(qubits, site, axis));
    return s;
  }

  int qubit_count() const { return qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  PauliSum& add(complex coeff, const PauliString& s) {
    if (s.qubit_count() != qubits_)
      throw dimension_error("PauliSum::add: string on " + std::to_string(s.qubit_count()) +
                            " qubits added to sum on " + std::to_string(qubits_));
    terms_.push_back({coeff, s});
    return *this;
  }

  PauliSum& operator+=(const PauliSum& other) {
    require_same(other, "operator+=");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
  }

  PauliSum& operator*=(complex scale) {
    for (auto& t : terms_) t.coeff *= scale;
    return *this;
  }

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, PauliSum b) { return a += (b *= -1.0); }
  friend PauliSum operator*(complex s, PauliSum a) { return a *= s; }

  /// Places `high` on the qubits above this sum's register.
  PauliSum tensor(const PauliSum& high) const {
    PauliSum out(qubits_ + high.qubits_);
    for (const auto& a : terms_)
      for (const auto& b : high.terms_) out.add(a.coeff * b.coeff, a.string.tensor(b.string));
    return out;
  }

  void require_same(const PauliSum& other, const char* where) const {
    if (other.qubits_ != qubits_)
      throw dimension_error(std::string(where) + ": qubit counts differ (" +
                            std::to_string(qubits_) + " vs " + std::to_string(other.qubits_) + ")");
  }

 private:
  int qubits_ = 0;
  std::vector<Term> terms_;
};

/// Merges duplicate strings and drops terms with |coeff| <= drop_tol.
/// Output is in canonical (lexicographic) order.
inline PauliSum collect(const PauliSum& a, double drop_tol = kDropTol) {
  if (drop_tol < 0) throw domain_error("collect: negative drop tolerance");
  std::map<PauliString, complex> merged;
  for (const auto& t : a.terms()) merged[t.string] += t.coeff;
  PauliSum out(a.qubit_count());
  for (const auto& [s, c] : merged)
    if (std::abs(c) > drop_tol) out.add(c, s);
  return out;
}

inline PauliSum sum_multiply(const PauliSum& a, const PauliSum& b) {
  a.require_same(b, "sum_multiply");
  std::map<PauliString, complex> merged;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      auto [phase, r] = multiply(ta.string, tb.string);
      merged[r] += phase * ta.coeff * tb.coeff;
    }
  PauliSum out(a.qubit_count());
  for (const auto& [s, c] : merged)
    if (std::abs(c) > kDropTol) out.add(c, s);
  return out;
}

inline PauliSum operator*(const PauliSum& a, const PauliSum& b) { return sum_multiply(a, b); }

enum class Transform { adjoint, transpose, conjugate };

/// X and Z are real symmetric; Y is imaginary antisymmetric, so it flips sign
/// under both transpose and conjugation. Coefficients conjugate under adjoint
/// and conjugate.
inline PauliSum unary_transform(const PauliSum& a, Transform mode) {
  PauliSum out(a.qubit_count());
  for (const auto& t : a.terms()) {
    complex c = t.coeff;
    if (mode != Transform::transpose) c = std::conj(c);
    if (mode != Transform::adjoint && (t.string.y_count() & 1)) c = -c;
    out.add(c, t.string);
  }
  return out;
}

inline PauliSum adjoint(const PauliSum& a) { return unary_transform(a, Transform::adjoint); }
inline PauliSum transpose(const PauliSum& a) { return unary_transform(a, Transform::transpose); }
inline PauliSum conjugate(const PauliSum& a) { return unary_transform(a, Transform::conjugate); }

inline double one_norm(const PauliSum& a) {
  double s = 0;
  for (const auto& t : a.terms()) s += std::abs(t.coeff);
  return s;
}

inline Eigen::MatrixXcd to_dense(const PauliSum& a, int dense_limit = kDenseLimit) {
  const int n = a.qubit_count();
  if (n > dense_limit)
    throw capacity_error("to_dense: " + std::to_string(n) + " qubits exceeds dense limit " +
                         std::to_string(dense_limit));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : a.terms()) {
    const std::uint64_t flip = t.string.x_mask();
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto col = static_cast<std::uint64_t>(b);
      m(static_cast<Eigen::Index>(col ^ flip), b) += t.coeff * t.string.basis_phase(col);
    }
  }
  return m;
}

/// Writes terms as `(<re>,<im>) <label>` joined by " + ".
inline std::string format(const PauliSum& a) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) os << " + ";
    first = false;
    auto clean = [](double v) { return v == 0 ? 0.0 : v; };  // no "-0"
    os << '(' << clean(t.coeff.real()) << ',' << clean(t.coeff.imag()) << ") " << t.string.label();
  }
  return os.str();
}

/// Parses the notation written by `format`. The separating `+` is optional.
/// An empty (or all-whitespace) string gives the empty sum on `qubits`.
inline PauliSum parse_pauli_sum(std::string_view text, int qubits) {
  PauliSum out(qubits);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '+'))
      ++i;
  };
  auto fail = [&](const std::string& why) {
    throw domain_error("parse_pauli_sum: " + why + " at offset " + std::to_string(i) + " in \"" +
                       std::string(text) + "\"");
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(') fail("expected '('");
    const auto close = text.find(')', i);
    if (close == std::string_view::npos) fail("missing ')'");
    const std::string inner(text.substr(i + 1, close - i - 1));
    const auto comma = inner.find(',');
    if (comma == std::string::npos) fail("coefficient needs (re,im)");
    double re = 0, im = 0;
    try {
      std::size_t used = 0;
      re = std::stod(inner.substr(0, comma), &used);
      im = std::stod(inner.substr(comma + 1), &used);
    } catch (const std::exception&) {
      fail("bad number in coefficient");
    }
    i = close + 1;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    const std::string_view label = text.substr(start, i - start);
    if (static_cast<int>(label.size()) != qubits)
      fail("label \"" + std::string(label) + "\" has " + std::to_string(label.size()) +
           " characters, expected " + std::to_string(qubits));
    out.add({re, im}, PauliString::from_label(label));
    skip();
  }
  return out;
}

}  // namespace lgap

template <>
struct std::hash<lgap::PauliString> {
  std::size_t operator()(const lgap::PauliString& p) const noexcept {
    const std::uint64_t h = p.x_mask() * 0x9E3779B97F4A7C15ULL ^ (p.z_mask() + 0x632BE59BD9B4E019ULL);
    return static_cast<std::size_t>(h ^ static_cast<std::uint64_t>(p.qubit_count()));
  }
};

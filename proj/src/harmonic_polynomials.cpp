#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polygrowth/error.hpp"
#include "polygrowth/harmonic.hpp"

namespace polygrowth {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using Exponents = std::array<int, 3>;

std::vector<Exponents> monomials(int vars, int max_degree) {
  std::vector<Exponents> out;
  for (int t = 0; t <= max_degree; ++t) {
    for (int a = t; a >= 0; --a) {
      if (vars == 1) {
        if (a == t) out.push_back({a, 0, 0});
        continue;
      }
      for (int b = t - a; b >= 0; --b) {
        int c = t - a - b;
        if (vars == 2 && c != 0) continue;
        out.push_back({a, b, c});
      }
    }
  }
  return out;
}

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::int64_t checked_pow(std::int64_t base, int exponent) {
  std::int64_t r = 1;
  for (int i = 0; i < exponent; ++i)
    if (__builtin_mul_overflow(r, base, &r)) throw InvalidArgument("integer power overflows int64");
  return r;
}

int LatticePolynomial::degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.exponents[0] + t.exponents[1] + t.exponents[2]);
  return d;
}

double LatticePolynomial::evaluate(ElementView point) const {
  double sum = 0.0;
  for (const auto& t : terms) {
    double m = static_cast<double>(t.coefficient);
    for (int i = 0; i < variables; ++i) m *= std::pow(static_cast<double>(point[i]), t.exponents[i]);
    sum += m;
  }
  return sum;
}

std::int64_t LatticePolynomial::evaluate_exact(ElementView point) const {
  std::int64_t sum = 0;
  for (const auto& t : terms) {
    std::int64_t m = t.coefficient;
    for (int i = 0; i < variables; ++i)
      if (__builtin_mul_overflow(m, checked_pow(point[i], t.exponents[i]), &m))
        throw InvalidArgument("exact polynomial evaluation overflows int64");
    if (__builtin_add_overflow(sum, m, &sum)) throw InvalidArgument("exact polynomial evaluation overflows int64");
  }
  return sum;
}

std::string LatticePolynomial::to_string() const {
  static const char names[] = {'x', 'y', 'z'};
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms) {
    auto c = t.coefficient;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << '-';
    first = false;
    auto mag = c < 0 ? -c : c;
    bool constant = t.exponents[0] + t.exponents[1] + t.exponents[2] == 0;
    if (mag != 1 || constant) out << mag;
    for (int i = 0; i < variables; ++i) {
      if (t.exponents[i] == 0) continue;
      out << names[i];
      if (t.exponents[i] > 1) out << '^' << t.exponents[i];
    }
  }
  return first ? "0" : out.str();
}

HarmonicPolynomialSpace harmonic_polynomial_space(int lattice_dimension, int max_degree) {
  if (lattice_dimension < 1 || lattice_dimension > 3)
    throw InvalidArgument("harmonic polynomial space supports lattice dimension 1..3");
  if (max_degree < 0 || max_degree > 6) throw InvalidArgument("harmonic polynomial space supports degree 0..6");

  const auto mono = monomials(lattice_dimension, max_degree);
  const std::size_t n = mono.size();
  auto index_of = [&](const Exponents& e) {
    for (std::size_t i = 0; i < n; ++i)
      if (mono[i] == e) return i;
    throw std::logic_error("monomial missing from basis");
  };

  // lap[row][col]: coefficient of monomial `row` in the Laplacian of monomial `col`.
  std::vector<std::vector<cpp_rational>> lap(n, std::vector<cpp_rational>(n));
  for (std::size_t col = 0; col < n; ++col) {
    for (int var = 0; var < lattice_dimension; ++var) {
      int e = mono[col][var];
      for (int k = 2; k <= e; k += 2) {
        Exponents target = mono[col];
        target[var] -= k;
        lap[index_of(target)][col] += 2 * binomial(e, k);
      }
    }
  }

  // Reduced row echelon form, columns in ascending degree order.
  std::vector<int> pivot_of_row;
  std::vector<bool> is_pivot(n, false);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t sel = row;
    while (sel < n && lap[sel][col] == 0) ++sel;
    if (sel == n) continue;
    std::swap(lap[sel], lap[row]);
    cpp_rational inv = 1 / lap[row][col];
    for (auto& x : lap[row]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || lap[r][col] == 0) continue;
      cpp_rational factor = lap[r][col];
      for (std::size_t c = 0; c < n; ++c) lap[r][c] -= factor * lap[row][c];
    }
    pivot_of_row.push_back(static_cast<int>(col));
    is_pivot[col] = true;
    ++row;
  }

  HarmonicPolynomialSpace space;
  space.lattice_dimension = lattice_dimension;
  space.max_degree = max_degree;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<cpp_rational> v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_of_row.size(); ++r) v[pivot_of_row[r]] = -lap[r][free];

    cpp_int lcm = 1;
    for (const auto& x : v)
      if (x != 0) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(x));
    cpp_int g = 0;
    std::vector<cpp_int> ints(n);
    for (std::size_t i = 0; i < n; ++i) {
      cpp_rational scaled = v[i] * lcm;
      ints[i] = boost::multiprecision::numerator(scaled);
      g = boost::multiprecision::gcd(g, ints[i]);
    }

    LatticePolynomial p;
    p.variables = lattice_dimension;
    // leading term first: highest degree, then monomial order
    for (std::size_t i = n; i-- > 0;) {
      if (ints[i] == 0) continue;
      cpp_int c = ints[i] / g;
      if (c > cpp_int(INT64_MAX) || c < cpp_int(INT64_MIN)) throw InvalidArgument("coefficient overflow");
      p.terms.push_back({mono[i], static_cast<std::int64_t>(c)});
    }
    space.basis.push_back(std::move(p));
  }
  return space;
}

HarmonicBasis lattice_harmonic_basis(const BallPtr& ball, int max_degree) {
  auto dim = ball->model().lattice_dimension();
  if (!dim) throw InvalidArgument("lattice harmonic basis needs a Z^d model");
  auto space = harmonic_polynomial_space(*dim, max_degree);
  HarmonicBasis basis;
  basis.ball = ball;
  for (const auto& p : space.basis) {
    std::vector<double> values(ball->size());
    for (std::size_t v = 0; v < ball->size(); ++v) values[v] = p.evaluate(ball->element(v));
    basis.functions.emplace_back(ball, std::move(values));
    basis.labels.push_back(p.to_string());
  }
  return basis;
}

}  // namespace polygrowth

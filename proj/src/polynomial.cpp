#include "shockfit/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace shockfit {

namespace {

void trim(std::vector<double>& c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

// Bisection for a sign change of p on [lo, hi]; p is monotone there.
double bisect_root(const Polynomial& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(c_); }
Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(c_); }

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial{};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

int Polynomial::degree() const { return static_cast<int>(c_.size()) - 1; }

std::vector<double> Polynomial::roots_in(double lo, double hi) const {
  std::vector<double> out;
  if (lo > hi || is_zero()) return out;
  if (degree() == 0) return out;
  if (degree() == 1) {
    const double r = -c_[0] / c_[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return out;
  }
  // Partition [lo, hi] into monotone pieces by the critical points, then bisect.
  std::vector<double> brk = derivative().roots_in(lo, hi);
  brk.insert(brk.begin(), lo);
  brk.push_back(hi);
  const double scale = std::max(1.0, std::max(std::abs((*this)(lo)), std::abs((*this)(hi))));
  for (std::size_t k = 0; k + 1 < brk.size(); ++k) {
    const double a = brk[k], b = brk[k + 1];
    if (!(b > a)) continue;
    const double fa = (*this)(a), fb = (*this)(b);
    if (fa == 0.0) out.push_back(a);
    if (fa * fb < 0.0) out.push_back(bisect_root(*this, a, b));
  }
  const double fend = (*this)(hi);
  if (fend == 0.0) out.push_back(hi);
  std::sort(out.begin(), out.end());
  // Deduplicate near-coincident roots from adjacent pieces.
  std::vector<double> dedup;
  for (double r : out) {
    if (dedup.empty() || std::abs(r - dedup.back()) > 1e-13 * (1.0 + std::abs(r) + scale * 0))
      dedup.push_back(r);
  }
  return dedup;
}

double poly_min_on(const Polynomial& p, double lo, double hi) {
  double m = std::min(p(lo), p(hi));
  for (double r : p.derivative().roots_in(lo, hi)) m = std::min(m, p(r));
  return m;
}

double poly_max_on(const Polynomial& p, double lo, double hi) {
  double m = std::max(p(lo), p(hi));
  for (double r : p.derivative().roots_in(lo, hi)) m = std::max(m, p(r));
  return m;
}

double poly_max_abs_on(const Polynomial& p, double lo, double hi) {
  return std::max(std::abs(poly_min_on(p, lo, hi)), std::abs(poly_max_on(p, lo, hi)));
}

}  // namespace shockfit

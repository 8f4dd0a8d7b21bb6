#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace viscoflow {

/// Coefficients, highest degree first: {a0, a1, ..., an} is a0 x^n + ... + an.
using Polynomial = std::vector<double>;

template <class T>
T evaluate(const Polynomial& p, T x) {
  T acc{0.0};
  for (double c : p) acc = acc * x + c;
  return acc;
}

inline Polynomial derivative(const Polynomial& p) {
  Polynomial d;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 1 < n; ++i) d.push_back(p[i] * static_cast<double>(n - 1 - i));
  return d;
}

inline Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  if (a.empty() || b.empty()) return {};
  Polynomial c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

struct RootSet {
  std::vector<std::complex<double>> roots;  // ordered by (real, imag)
  bool degree_reduced = false;              // leading zero coefficients were dropped
};

/// Roots from the eigenvalues of the companion matrix, each refined by one
/// Newton step (kept only if it lowers |p|).
inline RootSet poly_roots(const Polynomial& poly) {
  RootSet out;
  std::size_t lead = 0;
  while (lead < poly.size() && poly[lead] == 0.0) ++lead;
  if (lead == poly.size()) throw std::invalid_argument("poly_roots: zero polynomial");
  out.degree_reduced = lead > 0;
  const Polynomial p(poly.begin() + static_cast<std::ptrdiff_t>(lead), poly.end());
  const Eigen::Index deg = static_cast<Eigen::Index>(p.size()) - 1;
  if (deg == 0) return out;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index j = 0; j < deg; ++j) companion(0, j) = -p[static_cast<std::size_t>(j + 1)] / p[0];
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);

  const Polynomial dp = derivative(p);
  for (Eigen::Index i = 0; i < deg; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    const auto fz = evaluate(p, z);
    const auto dfz = evaluate(dp, z);
    if (std::abs(dfz) > 0.0) {
      const auto polished = z - fz / dfz;
      if (std::isfinite(polished.real()) && std::isfinite(polished.imag()) &&
          std::abs(evaluate(p, polished)) < std::abs(fz))
        z = polished;
    }
    out.roots.push_back(z);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

/// Leading principal minors of the Hurwitz matrix (leading coefficient made
/// positive first). All positive <=> every root has negative real part.
inline std::vector<double> hurwitz_determinants(Polynomial p) {
  while (!p.empty() && p.front() == 0.0) p.erase(p.begin());
  if (p.size() < 2) return {};
  if (p.front() < 0.0)
    for (double& c : p) c = -c;
  const Eigen::Index n = static_cast<Eigen::Index>(p.size()) - 1;
  auto coeff = [&](Eigen::Index k) { return (k >= 0 && k <= n) ? p[static_cast<std::size_t>(k)] : 0.0; };
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) H(i, j) = coeff(2 * j - i + 1);
  std::vector<double> deltas;
  for (Eigen::Index k = 1; k <= n; ++k) deltas.push_back(H.topLeftCorner(k, k).determinant());
  return deltas;
}

}  // namespace viscoflow

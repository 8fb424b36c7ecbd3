#pragma once

#include <cmath>
#include <complex>

namespace rp {

using cplx = std::complex<double>;

// Probability amplitudes on |g> and |e>.
struct State {
  cplx cg{1.0, 0.0};
  cplx ce{0.0, 0.0};
};

// 2x2 complex matrix acting on (cg, ce); entry `xy` is <x|U|y>.
struct Mat2 {
  cplx gg{1.0, 0.0}, ge{0.0, 0.0};
  cplx eg{0.0, 0.0}, ee{1.0, 0.0};
};

inline Mat2 operator*(const Mat2& l, const Mat2& r) {
  return {l.gg * r.gg + l.ge * r.eg, l.gg * r.ge + l.ge * r.ee,
          l.eg * r.gg + l.ee * r.eg, l.eg * r.ge + l.ee * r.ee};
}

inline State operator*(const Mat2& m, const State& s) {
  return {m.gg * s.cg + m.ge * s.ce, m.eg * s.cg + m.ee * s.ce};
}

inline Mat2 operator*(const cplx& a, const Mat2& m) {
  return {a * m.gg, a * m.ge, a * m.eg, a * m.ee};
}

inline Mat2 adjoint(const Mat2& m) {
  return {std::conj(m.gg), std::conj(m.eg), std::conj(m.ge), std::conj(m.ee)};
}

inline Mat2 transpose(const Mat2& m) { return {m.gg, m.eg, m.ge, m.ee}; }

inline cplx trace(const Mat2& m) { return m.gg + m.ee; }

inline cplx det(const Mat2& m) { return m.gg * m.ee - m.ge * m.eg; }

inline double max_abs_diff(const Mat2& x, const Mat2& y) {
  return std::max(std::max(std::abs(x.gg - y.gg), std::abs(x.ge - y.ge)),
                  std::max(std::abs(x.eg - y.eg), std::abs(x.ee - y.ee)));
}

// Largest |entry| of U^dag U - I; zero for an exactly unitary U.
inline double unitarity_defect(const Mat2& u) {
  const Mat2 p = adjoint(u) * u;
  return std::max(std::max(std::abs(p.gg - 1.0), std::abs(p.ge)),
                  std::max(std::abs(p.eg), std::abs(p.ee - 1.0)));
}

inline double norm(const State& s) {
  return std::sqrt(std::norm(s.cg) + std::norm(s.ce));
}

}  // namespace rp

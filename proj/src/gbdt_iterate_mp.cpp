// Extended-precision GBDT recursion. Kept in its own translation unit because the
// Boost.Multiprecision + Eigen instantiations are slow to compile.
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "dts/gbdt.hpp"

namespace dts {

namespace {

using MpComplex = boost::multiprecision::cpp_complex_50;
using MpMatrix = Eigen::Matrix<MpComplex, Eigen::Dynamic, Eigen::Dynamic>;

MpMatrix to_mp(const CMatrix& m) {
  MpMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) out(i, k) = MpComplex(m(i, k).real(), m(i, k).imag());
  }
  return out;
}

CMatrix to_double(const MpMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) {
      out(i, k) = Complex(static_cast<double>(m(i, k).real()), static_cast<double>(m(i, k).imag()));
    }
  }
  return out;
}

MpMatrix mp_identity(Index n) { return MpMatrix::Identity(n, n); }

// Pi* S^{-1} Pi through the Cholesky factor of S.
MpMatrix gram(const MpMatrix& s, const MpMatrix& pi, Index k) {
  Eigen::LLT<MpMatrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::NotPositiveDefinite,
                "S_" + std::to_string(k) + " lost positive definiteness", k);
  }
  const MpMatrix y = llt.matrixL().solve(pi);
  return y.adjoint() * y;
}

}  // namespace

GbdtIterates gbdt_iterate(const AdmissibleTriple& t, Index n, const Tolerances& tol) {
  if (n < 0) throw Error(Errc::InvalidArgument, "N must be non-negative");
  const Index p = t.p();
  const Index dim = t.n();
  const auto sig = SignatureConstants::make(p);
  const MpMatrix j = to_mp(sig.j);
  const MpMatrix a_inv = Eigen::PartialPivLU<MpMatrix>(to_mp(t.a())).solve(mp_identity(dim));
  const MpMatrix a_inv_adj = a_inv.adjoint();
  const MpComplex i_unit(0, 1);

  MpMatrix pi = to_mp(t.pi0());
  MpMatrix s = to_mp(t.s0());
  MpMatrix g = gram(s, pi, 0);

  GbdtIterates out;
  out.p = p;
  std::vector<CMatrix> c;
  for (Index k = 0; k <= n; ++k) {
    const MpMatrix pi_next = pi + i_unit * a_inv * pi * j;
    MpMatrix s_next = s + a_inv * s * a_inv_adj + a_inv * pi * pi.adjoint() * a_inv_adj;
    s_next = (s_next + s_next.adjoint()) / 2;
    const MpMatrix g_next = gram(s_next, pi_next, k + 1);
    MpMatrix ck = mp_identity(2 * p) + g - g_next;
    ck = (ck + ck.adjoint()) / 2;

    out.pi.push_back(to_double(pi));
    out.s.push_back(to_double(s));
    c.push_back(to_double(ck));
    pi = pi_next;
    s = s_next;
    g = g_next;
  }
  out.c = c;
  out.potential = validate_potential(p, std::move(c), tol);
  return out;
}

}  // namespace dts

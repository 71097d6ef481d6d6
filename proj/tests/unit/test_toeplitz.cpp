#include <chrono>
#include <cmath>

#include "doctest.h"
#include "dts/gbdt.hpp"
#include "dts/toeplitz.hpp"
#include "generators.hpp"

using namespace dts;

namespace {

MomentData scalar_moments(std::vector<Complex> s, double nu = 0.0) {
  MomentData m;
  m.p = 1;
  m.nu = CMatrix::Constant(1, 1, nu);
  for (const Complex v : s) m.s.push_back(CMatrix::Constant(1, 1, v));
  return m;
}

MomentData trivial_moments(Index p, Index count) {
  MomentData m;
  m.p = p;
  m.nu = CMatrix::Zero(p, p);
  m.s.push_back(2.0 * identity(p));
  for (Index k = 1; k < count; ++k) m.s.push_back(CMatrix::Zero(p, p));
  return m;
}

// Example-triple moments s_0, s_-1, s_-2 (oracle: Taylor expansion at 50 digits).
constexpr double kS0 = 7.4641016151377546;
constexpr double kS1 = -4.3094010767585031;
constexpr double kS2 = 2.4880338717125849;

}  // namespace

TEST_SUITE("toeplitz") {

TEST_CASE("trivial assembly, N = 2") {
  const auto t = assemble(trivial_moments(1, 2), 2);
  CHECK((t.s() - 2.0 * identity(2)).norm() == 0.0);
  CMatrix a(2, 2);
  a << 0.5 * kI, 0.0, kI, 0.5 * kI;
  CHECK((t.a() - a).norm() == 0.0);
  CHECK((t.phi1() - CMatrix::Ones(2, 1)).norm() == 0.0);
  CHECK((t.phi2() - CMatrix::Ones(2, 1)).norm() == 0.0);
  CHECK(t.displacement_residual() < 1e-15);
  CHECK(assemble(trivial_moments(1, 1), 1).displacement_residual() < 1e-15);
}

TEST_CASE("example moments, N = 2") {
  const auto t = assemble(scalar_moments({kS0, kS1}), 2);
  CMatrix s(2, 2);
  s << kS0, kS1, kS1, kS0;
  CHECK((t.s() - s).norm() < 1e-15);
  CHECK(t.positive());
}

TEST_CASE("positivity") {
  const auto v = positivity_check(assemble(trivial_moments(2, 5), 5));
  CHECK(v.positive);
  CHECK(v.min_pivot == doctest::Approx(2.0));

  const auto bad = positivity_check(assemble(scalar_moments({2.0, 3.0}), 2));
  CHECK_FALSE(bad.positive);
  CHECK(bad.failing_index.value_or(-1) == 1);
  try {
    assemble(scalar_moments({2.0, 3.0}), 2).cholesky();
    FAIL("non-positive S accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotPositiveDefinite);
  }

  const auto ex = gbdt_moments(example_triple(), 31);
  CHECK(assemble(ex, 32).positive());
}

TEST_CASE("validation") {
  MomentData m = trivial_moments(1, 3);
  m.s[0](0, 0) = Complex(2.0, 1.0);
  CHECK_THROWS_AS(validate_moments(m), Error);
  CHECK_THROWS_AS(assemble(trivial_moments(1, 2), 3), Error);
}

TEST_CASE("transfer function") {
  const auto t = assemble(trivial_moments(1, 1), 1);
  CMatrix expect(2, 2);
  expect << 2.0 / 3, -1.0 / 3, -1.0 / 3, 2.0 / 3;
  CHECK((transfer_function(t, -kI) - expect).norm() < 1e-15);
  CHECK((transfer_function(t, 1e8) - identity(2)).norm() < 1e-7);

  // Dense 50-digit oracle for the example moments at N = 2, lambda = 1 + i.
  const auto ex = assemble(scalar_moments({kS0, kS1}), 2);
  CMatrix w(2, 2);
  w << Complex(1.2478460969082653, 1.0028718707889796),
      Complex(0.37856406460551018, 2.6499484522385713),
      Complex(0.10143593539448982, 0.71005154776142872),
      Complex(0.83215390309173472, 1.5571281292110204);
  CHECK((transfer_function(ex, Complex(1, 1)) - w).norm() < 1e-13);

  CHECK_THROWS_AS(transfer_function(t, 0.5 * kI), Error);
}

TEST_CASE("property: J-property of the transfer function") {
  std::mt19937_64 rng(gen::kSeed + 20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tr = random_triple(rng, 1 + trial % 3, 1 + trial % 2);
    const auto t = assemble(gbdt_moments(tr, 5), 6);
    const auto sig = SignatureConstants::make(t.p());
    const Complex lambda = gen::point(rng);
    const CMatrix w1 = transfer_function(t, std::conj(lambda));
    const CMatrix w2 = transfer_function(t, lambda);
    CHECK((w1.adjoint() * sig.J * w2 - sig.J).norm() < 1e-9);
  }
}

TEST_CASE("fundamental solution from moments") {
  const auto t = assemble(trivial_moments(1, 1), 1);
  CMatrix d(2, 2);
  d << 0.5, 0, 0, 1.5;
  CHECK((fundamental_from_moments(t, 2.0 * kI) - d).norm() < 1e-15);
  d << 2.0 / 3, 0, 0, 4.0 / 3;
  CHECK((fundamental_from_moments(t, 3.0 * kI) - d).norm() < 1e-15);
  CHECK_THROWS_AS(fundamental_from_moments(t, 0.0), Error);
  CHECK_THROWS_AS(fundamental_from_moments(t, -kI), Error);
}

TEST_CASE("property: moments and GBDT potential give the same W_N") {
  std::mt19937_64 rng(gen::kSeed + 21);
  for (int trial = 0; trial < 6; ++trial) {
    const auto tr = random_triple(rng, 1 + trial % 3, 1 + trial % 2);
    const Index n = 4 + 2 * trial;
    const auto it = gbdt_iterate(tr, n);
    const auto t = assemble(gbdt_moments(tr, n), n);
    const Complex lambda = gen::point(rng, 1.5);
    const auto w = fundamental_solution(it.potential, lambda, n).w.back();
    CHECK(rel_diff(fundamental_from_moments(t, lambda), w) < 1e-8);
  }
}

TEST_CASE("frakA") {
  const auto ex = assemble(gbdt_moments(example_triple(), 6), 7);
  CHECK((frak_a(ex, 0.0) - identity(2)).norm() < 1e-15);

  // frakA_N(zeta) J frakA_N(conj zeta)* = J, and the cross relation with W_N.
  std::mt19937_64 rng(gen::kSeed + 22);
  for (int trial = 0; trial < 8; ++trial) {
    const auto tr = random_triple(rng, 1 + trial % 3, 1 + trial % 2);
    const Index n = 3 + trial;
    const auto t = assemble(gbdt_moments(tr, n), n);
    const auto sig = SignatureConstants::make(t.p());
    const Complex z = gen::regular_point(rng);
    const CMatrix a1 = frak_a(t, z);
    const CMatrix a2 = frak_a(t, std::conj(z));
    CHECK((a1 * sig.J * a2.adjoint() - sig.J).norm() < 1e-9 * std::max(1.0, a1.norm() * a2.norm()));

    const Complex lambda = gen::point(rng, 1.5);
    const CMatrix lhs = sig.K * fundamental_from_moments(t, std::conj(lambda)).adjoint();
    const Complex f = std::pow((lambda - kI) / lambda, static_cast<double>(n));
    const CMatrix rhs = f * sig.j * sig.J * frak_a(t, 2.0 / lambda) * sig.J * sig.j * sig.K;
    CHECK(rel_diff(lhs, rhs) < 1e-8);
  }
}

TEST_CASE("semiseparable matvec") {
  SemiseparableGenerators zero{CMatrix::Zero(1, 1), CMatrix::Identity(1, 1), CMatrix::Zero(1, 1)};
  CVector x = CVector::LinSpaced(5, 1.0, 5.0);
  CHECK((semiseparable_matvec(zero, 2.0 * identity(1), 5, x) - 2.0 * x).norm() == 0.0);

  const auto tr = example_triple();
  const auto g = semiseparable_generators(tr);
  const auto m = gbdt_moments(tr, 7);
  CVector e1 = CVector::Zero(8);
  e1(0) = 1.0;
  const CVector y = semiseparable_matvec(g, m.s[0], 8, e1);
  CHECK((y - toeplitz_matrix(m, 8).col(0)).norm() < 1e-12);

  std::mt19937_64 rng(gen::kSeed + 23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rt = random_triple(rng, 1 + trial % 3, 1 + trial % 2);
    const auto rg = semiseparable_generators(rt);
    const Index n = 40;
    const auto rm = gbdt_moments(rt, n - 1);
    const CVector v = gen::complex_matrix(rng, n * rt.p(), 1);
    const CVector fast = semiseparable_matvec(rg, rm.s[0], n, v);
    const CVector dense = toeplitz_matrix(rm, n) * v;
    CHECK((fast - dense).norm() / dense.norm() < 1e-10);
  }
}

TEST_CASE("strictly lower submatrices of S have rank one for the example triple") {
  const auto m = gbdt_moments(example_triple(), 15);
  const CMatrix s = toeplitz_matrix(m, 16);
  for (Index cut = 1; cut < 16; ++cut) {
    const CMatrix lower = s.bottomLeftCorner(16 - cut, cut);
    Eigen::JacobiSVD<CMatrix> svd(lower);
    const auto sv = svd.singularValues();
    if (sv.size() > 1) CHECK(sv(1) < 1e-10 * sv(0));
  }
}

}  // TEST_SUITE

// Copyright 2026 The PBAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <set>

#include "pbag/algebra/domain.hpp"
#include "pbag/algebra/field.hpp"
#include "pbag/algebra/polynomial.hpp"
#include "pbag/error.hpp"

namespace pbag::algebra {
namespace {

using boost::multiprecision::cpp_int;

cpp_int to_int(const FieldScalar& x) {
  cpp_int v;
  auto b = x.to_bytes();
  boost::multiprecision::import_bits(v, b.begin(), b.end(), 8, true);
  return v;
}

const cpp_int& modulus() {
  static const cpp_int r(
      "0x73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
  return r;
}

FieldScalar fs(uint64_t v) { return FieldScalar(v); }

Polynomial poly(std::initializer_list<uint64_t> coeffs) {
  std::vector<FieldScalar> v;
  for (auto c : coeffs) v.push_back(fs(c));
  return Polynomial(std::move(v));
}

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(FieldScalarTest, ArithmeticAgreesWithBigIntegerModel) {
  Drbg rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    FieldScalar a = FieldScalar::random(rng), b = FieldScalar::random(rng);
    cpp_int ai = to_int(a), bi = to_int(b);
    ASSERT_LT(ai, modulus());
    EXPECT_EQ(to_int(a + b), (ai + bi) % modulus());
    EXPECT_EQ(to_int(a - b), (ai + modulus() - bi) % modulus());
    EXPECT_EQ(to_int(a * b), (ai * bi) % modulus());
    if (!b.is_zero()) EXPECT_EQ(to_int(a / b * b), ai);
  }
}

TEST(FieldScalarTest, CanonicalDecodingRejectsOrderAndAbove) {
  std::array<uint8_t, 32> r_bytes{};
  boost::multiprecision::export_bits(modulus(), r_bytes.begin(), 8, true);
  expect_error(ErrorCode::kNonCanonicalScalar, [&] { FieldScalar::from_bytes(r_bytes); });
  std::array<uint8_t, 32> zero{};
  EXPECT_TRUE(FieldScalar::from_bytes(zero).is_zero());
  auto minus_one = (-FieldScalar::one()).to_bytes();
  EXPECT_EQ(FieldScalar::from_bytes(minus_one), -FieldScalar::one());
  expect_error(ErrorCode::kZeroInverse, [] { FieldScalar::zero().inverse(); });
}

TEST(FieldScalarTest, HighTwoAdicity) {
  // (r - 1) is divisible by 2^32 but not by 2^33.
  cpp_int m = modulus() - 1;
  EXPECT_EQ(m % (cpp_int(1) << 32), 0);
  EXPECT_NE(m % (cpp_int(1) << 33), 0);
}

TEST(RootsOfUnityTest, TrivialSizes) {
  auto d1 = roots_of_unity(1);
  EXPECT_EQ(d1.size(), 1u);
  EXPECT_EQ(d1.omega(), FieldScalar::one());
  auto d2 = roots_of_unity(2);
  EXPECT_EQ(d2.omega(), -FieldScalar::one());
}

TEST(RootsOfUnityTest, ExactOrderByBruteForce) {
  for (size_t n : {8u, 16u, 256u, 1024u}) {
    auto d = roots_of_unity(n);
    FieldScalar x = d.omega();
    size_t order = 1;
    while (!(x == FieldScalar::one())) {
      x *= d.omega();
      ++order;
      ASSERT_LE(order, n);
    }
    EXPECT_EQ(order, n);
    EXPECT_EQ(d.omega().pow(n / 2), -FieldScalar::one());
    std::set<std::string> distinct;
    for (const auto& e : d.elements()) distinct.insert(e.to_hex());
    EXPECT_EQ(distinct.size(), n);
  }
}

TEST(RootsOfUnityTest, Errors) {
  expect_error(ErrorCode::kNonPowerOfTwo, [] { roots_of_unity(0); });
  expect_error(ErrorCode::kNonPowerOfTwo, [] { roots_of_unity(12); });
  expect_error(ErrorCode::kNoRootOfOrderN, [] { roots_of_unity(size_t{1} << 33); });
}

TEST(RootsOfUnityTest, IndexLookup) {
  auto d = roots_of_unity(16);
  for (size_t i = 0; i < 16; ++i) EXPECT_EQ(d.index_of(d.element(i)), i);
  EXPECT_FALSE(d.index_of(fs(2)).has_value());
}

TEST(InterpolateTest, SinglePointIsConstant) {
  std::vector<std::pair<FieldScalar, FieldScalar>> pts{{fs(5), fs(9)}};
  EXPECT_EQ(interpolate(pts), poly({9}));
}

TEST(InterpolateTest, ExactSquareFit) {
  std::vector<std::pair<FieldScalar, FieldScalar>> pts{
      {fs(0), fs(0)}, {fs(1), fs(1)}, {fs(2), fs(4)}, {fs(3), fs(9)}};
  EXPECT_EQ(interpolate(pts), poly({0, 0, 1}));
}

TEST(InterpolateTest, RandomPointsEvaluateBack) {
  Drbg rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<FieldScalar, FieldScalar>> pts;
    for (int k = 0; k < 8; ++k) pts.emplace_back(FieldScalar::random(rng), FieldScalar::random(rng));
    auto p = interpolate(pts);
    EXPECT_LT(p.degree(), 8);
    for (const auto& [x, y] : pts) EXPECT_EQ(p.evaluate(x), y);
  }
}

TEST(InterpolateTest, DuplicateAbscissa) {
  std::vector<std::pair<FieldScalar, FieldScalar>> pts{{fs(1), fs(2)}, {fs(1), fs(3)}};
  expect_error(ErrorCode::kDuplicateAbscissa, [&] { interpolate(pts); });
}

TEST(InterpolateTest, DomainRoundTripAndFftAgreement) {
  Drbg rng(4);
  for (size_t n : {1u, 2u, 8u, 64u}) {
    auto d = roots_of_unity(n);
    std::vector<FieldScalar> u(n);
    for (auto& x : u) x = FieldScalar::random(rng);
    Polynomial viaFft = d.ifft(u);
    std::vector<std::pair<FieldScalar, FieldScalar>> pts;
    for (size_t i = 0; i < n; ++i) pts.emplace_back(d.element(i), u[i]);
    EXPECT_EQ(interpolate(pts), viaFft);
    for (size_t i = 0; i < n; ++i) EXPECT_EQ(viaFft.evaluate(d.element(i)), u[i]);
    EXPECT_EQ(d.fft(viaFft.coeffs()), u);
  }
}

TEST(PolyDivideTest, Factorization) {
  auto [q, r] = poly_divide(poly({0, 0, 1}) - poly({1}), poly({0, 1}) - poly({1}));
  EXPECT_EQ(q, poly({1, 1}));
  EXPECT_TRUE(r.is_zero());
}

TEST(PolyDivideTest, SelfDivision) {
  Drbg rng(5);
  auto p = Polynomial::random(6, rng);
  auto [q, r] = poly_divide(p, p);
  EXPECT_EQ(q, poly({1}));
  EXPECT_TRUE(r.is_zero());
}

TEST(PolyDivideTest, MultiplyBackIdentity) {
  Drbg rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto n = Polynomial::random(7, rng);
    auto d = Polynomial::random(3, rng);
    auto [q, r] = poly_divide(n, d);
    EXPECT_EQ(d * q + r, n);
    EXPECT_LT(r.degree(), d.degree());
  }
}

TEST(PolyDivideTest, ByConstantAndByZero) {
  auto [q, r] = poly_divide(poly({2, 4, 6}), poly({2}));
  EXPECT_EQ(q, poly({1, 2, 3}));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(Polynomial().degree(), Polynomial::kZeroDegree);
  expect_error(ErrorCode::kDivisionByZeroPolynomial, [] { poly_divide(poly({1}), Polynomial()); });
}

TEST(PolyDivideTest, LowerDegreeNumeratorIsRemainder) {
  auto [q, r] = poly_divide(poly({1, 2}), poly({1, 2, 3}));
  EXPECT_TRUE(q.is_zero());
  EXPECT_EQ(r, poly({1, 2}));
}

TEST(VanishingPolyTest, FullDomainIsXnMinusOne) {
  for (size_t n : {1u, 2u, 4u, 32u}) {
    auto d = roots_of_unity(n);
    IndexSet all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    EXPECT_EQ(vanishing_poly(all, d), Polynomial::monomial(n) - poly({1}));
  }
}

TEST(VanishingPolyTest, SingleRootAtOne) {
  auto d = roots_of_unity(8);
  IndexSet i0{0};
  EXPECT_EQ(vanishing_poly(i0, d), poly({0, 1}) - poly({1}));
}

TEST(VanishingPolyTest, RootsExactlyOnSubset) {
  auto d = roots_of_unity(8);
  IndexSet idx{1, 3};
  auto p = vanishing_poly(idx, d);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.coeffs().back(), FieldScalar::one());
  for (size_t i = 0; i < 8; ++i) {
    bool member = i == 1 || i == 3;
    EXPECT_EQ(p.evaluate(d.element(i)).is_zero(), member) << i;
  }
}

TEST(VanishingPolyTest, Errors) {
  auto d = roots_of_unity(8);
  IndexSet empty, out{8}, dup{2, 2};
  expect_error(ErrorCode::kEmptyIndexSet, [&] { vanishing_poly(empty, d); });
  expect_error(ErrorCode::kIndexOutOfDomain, [&] { vanishing_poly(out, d); });
  expect_error(ErrorCode::kDuplicateIndex, [&] { vanishing_poly(dup, d); });
}

TEST(DerivativeAtRootTest, FullDomainValue) {
  auto d = roots_of_unity(4);
  IndexSet all{0, 1, 2, 3};
  EXPECT_EQ(derivative_at_root(all, 1, d), fs(4) * d.omega_inv());
}

TEST(DerivativeAtRootTest, SingletonIsOne) {
  auto d = roots_of_unity(8);
  IndexSet i0{0};
  EXPECT_EQ(derivative_at_root(i0, 0, d), FieldScalar::one());
}

TEST(DerivativeAtRootTest, MatchesSymbolicDerivative) {
  auto d = roots_of_unity(8);
  IndexSet idx{0, 2, 5};
  auto deriv = vanishing_poly(idx, d).derivative();
  for (size_t i : idx) EXPECT_EQ(derivative_at_root(idx, i, d), deriv.evaluate(d.element(i)));
  expect_error(ErrorCode::kIndexNotInSet, [&] { derivative_at_root(idx, 1, d); });
}

TEST(DerivativeAtRootTest, FullDomainIdentityAllSizes) {
  for (size_t n = 2; n <= 256; n *= 2) {
    auto d = roots_of_unity(n);
    IndexSet all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    auto deriv = (Polynomial::monomial(n) - poly({1})).derivative();
    for (size_t i = 0; i < n; ++i) {
      auto expected = fs(n) * d.element(i).inverse();
      ASSERT_EQ(deriv.evaluate(d.element(i)), expected);
      ASSERT_EQ(derivative_at_root(all, i, d), expected) << "n=" << n << " i=" << i;
    }
  }
}

TEST(PartialFractionTest, TwoRootTextbookCase) {
  auto d = roots_of_unity(2);
  IndexSet idx{0, 1};
  auto c = partial_fraction_coeffs(idx, d);
  EXPECT_EQ(c.at(0), fs(2).inverse());
  EXPECT_EQ(c.at(1), -fs(2).inverse());
}

TEST(PartialFractionTest, FullDomainShortcut) {
  auto d = roots_of_unity(16);
  IndexSet all(16);
  for (size_t i = 0; i < 16; ++i) all[i] = i;
  auto c = partial_fraction_coeffs(all, d);
  for (size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(c.at(i), d.element(i) / fs(16));
    EXPECT_EQ(c.at(i), derivative_at_root(all, i, d).inverse());
  }
}

TEST(PartialFractionTest, ClearedDenominatorIdentity) {
  Drbg rng(8);
  auto d = roots_of_unity(32);
  for (int trial = 0; trial < 20; ++trial) {
    std::set<size_t> chosen;
    while (chosen.size() < 5) chosen.insert(rng.uniform(32));
    IndexSet idx(chosen.begin(), chosen.end());
    auto c = partial_fraction_coeffs(idx, d);
    auto vanishing = vanishing_poly(idx, d);
    for (int k = 0; k < 10; ++k) {
      FieldScalar z = FieldScalar::random(rng);
      ASSERT_FALSE(d.index_of(z).has_value());
      FieldScalar sum;
      for (size_t i : idx) sum += c.at(i) / (z - d.element(i));
      EXPECT_EQ(sum * vanishing.evaluate(z), FieldScalar::one());
    }
  }
  IndexSet empty;
  expect_error(ErrorCode::kEmptyIndexSet, [&] { partial_fraction_coeffs(empty, d); });
}

TEST(LagrangeBasisTest, KroneckerProperty) {
  auto d = roots_of_unity(8);
  for (size_t i = 0; i < 8; ++i) {
    auto li = d.lagrange_basis(i);
    for (size_t j = 0; j < 8; ++j) {
      EXPECT_EQ(li.evaluate(d.element(j)), i == j ? FieldScalar::one() : FieldScalar());
    }
  }
}

}  // namespace
}  // namespace pbag::algebra

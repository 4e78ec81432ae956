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

#include "oracles.hpp"

namespace pbag::testing {

TrapdoorSetup setup_with_trapdoor(size_t n, uint64_t seed) {
  Drbg rng(seed);
  auto tau = algebra::FieldScalar::random(rng);
  return TrapdoorSetup{kzg::detail::setup_from_secret(n, tau), TrapdoorHandle{tau}};
}

curve::G1Point g1_at_tau(const algebra::Polynomial& f, const TrapdoorHandle& t) {
  return curve::G1Point::generator() * f.evaluate(t.tau);
}

algebra::Polynomial single_quotient(const algebra::Polynomial& f, const algebra::FieldScalar& x) {
  auto numerator = f - algebra::Polynomial::constant(f.evaluate(x));
  auto [q, r] = algebra::poly_divide(numerator, algebra::Polynomial::linear_root(x));
  return q;
}

}  // namespace pbag::testing

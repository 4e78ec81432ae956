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

// Test-only oracles. The trapdoor exponent lets tests compute g^(f(tau)) directly,
// independently of the SRS multi-scalar path used by the library.
#pragma once

#include <cstdint>

#include "pbag/kzg.hpp"

namespace pbag::testing {

struct TrapdoorHandle {
  algebra::FieldScalar tau;
};

struct TrapdoorSetup {
  kzg::PublicParameters pp;
  TrapdoorHandle trapdoor;
};

TrapdoorSetup setup_with_trapdoor(size_t n, uint64_t seed);

/// g1^(f(tau)) by direct exponentiation.
curve::G1Point g1_at_tau(const algebra::Polynomial& f, const TrapdoorHandle& t);

/// Quotient (f - f(omega^i)) / (X - omega^i) by long division.
algebra::Polynomial single_quotient(const algebra::Polynomial& f, const algebra::FieldScalar& x);

}  // namespace pbag::testing

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

#include "pbag/curve.hpp"

#include <memory>

#include "pbag/counters.hpp"
#include <algorithm>
#include <type_traits>

#include "pbag/error.hpp"

namespace pbag::curve {

namespace {

constexpr size_t kScalarBits = 255;

template <typename Affine, typename Point, typename ToAffine, typename Sizeof, typename Mult>
Point pippenger(std::span<const Point> points, std::span<const FieldScalar> scalars,
                size_t bits, ToAffine to_affine, Sizeof scratch_size, Mult mult) {
  if (points.size() != scalars.size()) {
    throw Error(ErrorCode::kWrongEvaluationCount, "msm size mismatch");
  }
  OpCounters::global().add_msm();
  // Identity points have no affine form in blst's Pippenger; drop them.
  using Raw = std::remove_cvref_t<decltype(points[0].raw())>;
  std::vector<const Raw*> raw_points;
  std::vector<blst_scalar> raw_scalars;
  raw_points.reserve(points.size());
  raw_scalars.reserve(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].is_identity() || scalars[i].is_zero()) continue;
    raw_points.push_back(&points[i].raw());
    raw_scalars.push_back(scalars[i].to_blst_scalar());
  }
  // One shared inversion for the whole batch.
  std::vector<Affine> affine(raw_points.size());
  if (!affine.empty()) to_affine(affine.data(), raw_points.data(), raw_points.size());
  if (affine.empty()) return Point::identity();
  std::vector<const Affine*> point_ptrs(affine.size());
  std::vector<const byte*> scalar_ptrs(affine.size());
  for (size_t i = 0; i < affine.size(); ++i) {
    point_ptrs[i] = &affine[i];
    scalar_ptrs[i] = raw_scalars[i].b;
  }
  std::unique_ptr<limb_t[]> scratch(
      new limb_t[scratch_size(affine.size()) / sizeof(limb_t) + 1]);
  return mult(point_ptrs.data(), affine.size(), scalar_ptrs.data(), bits, scratch.get());
}

}  // namespace

G1Point G1Point::generator() { return G1Point(*blst_p1_generator()); }

G1Point G1Point::operator+(const G1Point& o) const {
  blst_p1 out;
  blst_p1_add_or_double(&out, &p_, &o.p_);
  return G1Point(out);
}

G1Point G1Point::operator-() const {
  blst_p1 out = p_;
  blst_p1_cneg(&out, true);
  return G1Point(out);
}

G1Point G1Point::operator-(const G1Point& o) const { return *this + (-o); }

G1Point G1Point::operator*(const FieldScalar& s) const {
  OpCounters::global().add_g1_mult();
  blst_scalar raw = s.to_blst_scalar();
  blst_p1 out;
  blst_p1_mult(&out, &p_, raw.b, kScalarBits);
  return G1Point(out);
}

bool G1Point::is_identity() const { return blst_p1_is_inf(&p_); }

bool G1Point::operator==(const G1Point& o) const { return blst_p1_is_equal(&p_, &o.p_); }

std::array<uint8_t, G1Point::kCompressedBytes> G1Point::to_bytes() const {
  std::array<uint8_t, kCompressedBytes> out{};
  blst_p1_compress(out.data(), &p_);
  return out;
}

G1Point G1Point::from_bytes(ByteSpan compressed) {
  if (compressed.size() != kCompressedBytes) {
    throw Error(ErrorCode::kInvalidGroupElement, "G1 encoding must be 48 bytes");
  }
  blst_p1_affine a;
  if (blst_p1_uncompress(&a, compressed.data()) != BLST_SUCCESS) {
    throw Error(ErrorCode::kInvalidGroupElement, "G1 point not on curve");
  }
  if (!blst_p1_affine_in_g1(&a)) {
    throw Error(ErrorCode::kInvalidGroupElement, "G1 point outside prime-order subgroup");
  }
  blst_p1 p;
  blst_p1_from_affine(&p, &a);
  return G1Point(p);
}

blst_p1_affine G1Point::to_affine() const {
  blst_p1_affine a;
  blst_p1_to_affine(&a, &p_);
  return a;
}

G2Point G2Point::generator() { return G2Point(*blst_p2_generator()); }

G2Point G2Point::operator+(const G2Point& o) const {
  blst_p2 out;
  blst_p2_add_or_double(&out, &p_, &o.p_);
  return G2Point(out);
}

G2Point G2Point::operator-() const {
  blst_p2 out = p_;
  blst_p2_cneg(&out, true);
  return G2Point(out);
}

G2Point G2Point::operator-(const G2Point& o) const { return *this + (-o); }

G2Point G2Point::operator*(const FieldScalar& s) const {
  OpCounters::global().add_g2_mult();
  blst_scalar raw = s.to_blst_scalar();
  blst_p2 out;
  blst_p2_mult(&out, &p_, raw.b, kScalarBits);
  return G2Point(out);
}

bool G2Point::is_identity() const { return blst_p2_is_inf(&p_); }

bool G2Point::operator==(const G2Point& o) const { return blst_p2_is_equal(&p_, &o.p_); }

std::array<uint8_t, G2Point::kCompressedBytes> G2Point::to_bytes() const {
  std::array<uint8_t, kCompressedBytes> out{};
  blst_p2_compress(out.data(), &p_);
  return out;
}

G2Point G2Point::from_bytes(ByteSpan compressed) {
  if (compressed.size() != kCompressedBytes) {
    throw Error(ErrorCode::kInvalidGroupElement, "G2 encoding must be 96 bytes");
  }
  blst_p2_affine a;
  if (blst_p2_uncompress(&a, compressed.data()) != BLST_SUCCESS) {
    throw Error(ErrorCode::kInvalidGroupElement, "G2 point not on curve");
  }
  if (!blst_p2_affine_in_g2(&a)) {
    throw Error(ErrorCode::kInvalidGroupElement, "G2 point outside prime-order subgroup");
  }
  blst_p2 p;
  blst_p2_from_affine(&p, &a);
  return G2Point(p);
}

blst_p2_affine G2Point::to_affine() const {
  blst_p2_affine a;
  blst_p2_to_affine(&a, &p_);
  return a;
}

G1Point msm(std::span<const G1Point> points, std::span<const FieldScalar> scalars, size_t bits) {
  return pippenger<blst_p1_affine, G1Point>(
      points, scalars, std::min(bits, kScalarBits), blst_p1s_to_affine,
      blst_p1s_mult_pippenger_scratch_sizeof,
      [](const blst_p1_affine* const* pts, size_t n, const byte* const* sc, size_t nbits,
         limb_t* scratch) {
        blst_p1 out;
        blst_p1s_mult_pippenger(&out, pts, n, sc, nbits, scratch);
        return G1Point::from_raw(out);
      });
}

G2Point msm(std::span<const G2Point> points, std::span<const FieldScalar> scalars, size_t bits) {
  return pippenger<blst_p2_affine, G2Point>(
      points, scalars, std::min(bits, kScalarBits), blst_p2s_to_affine,
      blst_p2s_mult_pippenger_scratch_sizeof,
      [](const blst_p2_affine* const* pts, size_t n, const byte* const* sc, size_t nbits,
         limb_t* scratch) {
        blst_p2 out;
        blst_p2s_mult_pippenger(&out, pts, n, sc, nbits, scratch);
        return G2Point::from_raw(out);
      });
}

namespace {

constexpr size_t kTableBits = 8;

template <typename Affine, typename Point, typename ToAffine, typename Precompute>
std::vector<Affine> build_table(std::span<const Point> bases, size_t entry_bytes,
                                ToAffine to_affine, Precompute precompute) {
  using Raw = std::remove_cvref_t<decltype(bases[0].raw())>;
  std::vector<const Raw*> raw;
  for (const auto& b : bases) {
    if (b.is_identity()) throw Error(ErrorCode::kInvalidGroupElement, "identity base");
    raw.push_back(&b.raw());
  }
  std::vector<Affine> affine(raw.size());
  if (!raw.empty()) to_affine(affine.data(), raw.data(), raw.size());
  std::vector<const Affine*> ptrs;
  for (const auto& a : affine) ptrs.push_back(&a);
  std::vector<Affine> table(entry_bytes / sizeof(Affine));
  if (!ptrs.empty()) precompute(table.data(), kTableBits, ptrs.data(), ptrs.size());
  return table;
}

template <typename Point, typename Mult, typename Sizeof>
Point table_msm(size_t size, std::span<const FieldScalar> scalars, Sizeof scratch_size,
                Mult mult) {
  if (scalars.size() > size) {
    throw Error(ErrorCode::kWrongEvaluationCount, "more scalars than bases");
  }
  OpCounters::global().add_msm();
  if (scalars.empty()) return Point::identity();
  std::vector<blst_scalar> raw(scalars.size());
  std::vector<const byte*> ptrs(scalars.size());
  for (size_t i = 0; i < scalars.size(); ++i) {
    raw[i] = scalars[i].to_blst_scalar();
    ptrs[i] = raw[i].b;
  }
  std::unique_ptr<limb_t[]> scratch(
      new limb_t[scratch_size(scalars.size()) / sizeof(limb_t) + 1]);
  return mult(ptrs.data(), scalars.size(), scratch.get());
}

}  // namespace

FixedBaseG1::FixedBaseG1(std::span<const G1Point> bases)
    : size_(bases.size()),
      table_(build_table<blst_p1_affine>(
          bases, blst_p1s_mult_wbits_precompute_sizeof(kTableBits, bases.size()),
          blst_p1s_to_affine, blst_p1s_mult_wbits_precompute)) {}

G1Point FixedBaseG1::msm(std::span<const FieldScalar> scalars) const {
  return table_msm<G1Point>(size_, scalars, blst_p1s_mult_wbits_scratch_sizeof,
                            [&](const byte* const* sc, size_t n, limb_t* scratch) {
                              blst_p1 out;
                              blst_p1s_mult_wbits(&out, table_.data(), kTableBits, n, sc,
                                                  kScalarBits, scratch);
                              return G1Point::from_raw(out);
                            });
}

FixedBaseG2::FixedBaseG2(std::span<const G2Point> bases)
    : size_(bases.size()),
      table_(build_table<blst_p2_affine>(
          bases, blst_p2s_mult_wbits_precompute_sizeof(kTableBits, bases.size()),
          blst_p2s_to_affine, blst_p2s_mult_wbits_precompute)) {}

G2Point FixedBaseG2::msm(std::span<const FieldScalar> scalars) const {
  return table_msm<G2Point>(size_, scalars, blst_p2s_mult_wbits_scratch_sizeof,
                            [&](const byte* const* sc, size_t n, limb_t* scratch) {
                              blst_p2 out;
                              blst_p2s_mult_wbits(&out, table_.data(), kTableBits, n, sc,
                                                  kScalarBits, scratch);
                              return G2Point::from_raw(out);
                            });
}

bool pairings_equal(const G1Point& a1, const G2Point& b1, const G1Point& a2, const G2Point& b2) {
  OpCounters::global().add_pairings(2);
  // e(a1, b1) * e(-a2, b2) == 1. A Miller loop with an identity argument is 1.
  const G1Point neg_a2 = -a2;
  blst_fp12 acc;
  bool have_acc = false;
  auto accumulate = [&](const G1Point& p, const G2Point& q) {
    if (p.is_identity() || q.is_identity()) return;
    blst_p1_affine pa = p.to_affine();
    blst_p2_affine qa = q.to_affine();
    blst_fp12 f;
    blst_miller_loop(&f, &qa, &pa);
    if (have_acc) {
      blst_fp12_mul(&acc, &acc, &f);
    } else {
      acc = f;
      have_acc = true;
    }
  };
  accumulate(a1, b1);
  accumulate(neg_a2, b2);
  if (!have_acc) return true;
  blst_fp12 out;
  blst_final_exp(&out, &acc);
  return blst_fp12_is_one(&out);
}

}  // namespace pbag::curve

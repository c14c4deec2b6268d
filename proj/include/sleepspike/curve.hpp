#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sleepspike/bigint.hpp"

namespace sleepspike {

/// Affine point; `infinity` marks the point at infinity and x, y are then 0.
struct AffinePoint {
   Nat x;
   Nat y;
   bool infinity = false;

   static AffinePoint at_infinity() { return AffinePoint{0, 0, true}; }

   friend bool operator==(const AffinePoint& a, const AffinePoint& b) {
      if(a.infinity || b.infinity) {
         return a.infinity == b.infinity;
      }
      return a.x == b.x && a.y == b.y;
   }
};

/// Jacobian point (X, Y, Z) representing (X/Z^2, Y/Z^3). Any Z == 0 triple is
/// the identity; the all-zero triple is the identity encoding the windowed
/// engines propagate, and operator== compares representations bit for bit.
struct JacobianPoint {
   Nat x;
   Nat y;
   Nat z;

   static JacobianPoint zero() { return JacobianPoint{0, 0, 0}; }
   static JacobianPoint from_affine(const AffinePoint& p);

   bool is_identity() const { return z == 0; }
   bool is_all_zero() const { return x == 0 && y == 0 && z == 0; }

   friend bool operator==(const JacobianPoint& a, const JacobianPoint& b) {
      return a.x == b.x && a.y == b.y && a.z == b.z;
   }
};

/// Short Weierstrass curve y^2 = x^3 + ax + b over F_p with a base point G of
/// prime order n.
struct CurveParams {
   std::string name;
   Nat p;
   Nat a;
   Nat b;
   AffinePoint g;
   Nat n;

   /// Bit length of the group order (lambda).
   std::size_t order_bits() const { return bit_length(n); }
   std::size_t order_bytes() const { return (order_bits() + 7) / 8; }
   std::size_t field_bytes() const { return (bit_length(p) + 7) / 8; }
};

bool on_curve(const AffinePoint& pt, const CurveParams& c);

/// Checks discriminant, base point membership, primality of n and n*G = O.
/// Throws std::invalid_argument describing the first failed check.
void validate_curve(const CurveParams& c);

JacobianPoint point_double(const JacobianPoint& p, const CurveParams& c);
JacobianPoint point_add(const JacobianPoint& p, const JacobianPoint& q, const CurveParams& c);

/// P + Q with Q affine. Q must not be the point at infinity and P should not
/// be the identity: an all-zero P yields the all-zero triple, which callers
/// replace through their own masked copy (as the windowed engines do).
JacobianPoint mixed_add(const JacobianPoint& p, const AffinePoint& q, const CurveParams& c);

JacobianPoint point_negate(const JacobianPoint& p, const CurveParams& c);
AffinePoint affine_negate(const AffinePoint& p, const CurveParams& c);

AffinePoint to_affine(const JacobianPoint& p, const CurveParams& c);

/// Left-to-right double-and-add; the variable-time reference multiplier.
AffinePoint scalar_mul_naive(const Nat& k, const AffinePoint& p, const CurveParams& c);

/// Hamming weight of the (X, Y, Z) words; the engines' register proxy.
std::size_t hamming_weight(const JacobianPoint& p);
std::size_t hamming_weight(const AffinePoint& p);
std::size_t hamming_distance(const JacobianPoint& a, const JacobianPoint& b);

/// Uncompressed SEC1 encoding 04 || x || y in lowercase hex ("00" for infinity).
std::string encode_point(const AffinePoint& p, const CurveParams& c);
AffinePoint decode_point(std::string_view hex, const CurveParams& c);

// Named curves ---------------------------------------------------------------

/// NIST P-256.
const CurveParams& curve_p256();
/// SEC 2 secp128r1 (128-bit prime order).
const CurveParams& curve_secp128r1();
/// Small curve with prime order below 2^16 found by brute-force point counting.
const CurveParams& curve_toy16();

/// Prime-order curve y^2 = x^3 + b with an order of about `bits` bits,
/// constructed by complex multiplication with discriminant -3 (4p = t^2 + 3v^2)
/// and deterministic in `seed`.
CurveParams make_cm_curve(std::size_t bits, std::uint64_t seed);

/// Brute-force search for a curve over a prime p < 2^bits whose point count
/// is prime. Only practical for bits <= 20.
CurveParams make_toy_curve(std::size_t bits);

/// Count of points (including infinity) by enumerating x; tiny fields only.
Nat brute_force_order(const Nat& p, const Nat& a, const Nat& b);

/// Lookup by name: "p256", "secp128r1", "toy16", or "cm<bits>" (e.g. "cm96").
const CurveParams& curve_by_name(std::string_view name);
std::vector<std::string> curve_names();

}  // namespace sleepspike

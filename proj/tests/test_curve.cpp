#include <doctest.h>

#include <optional>

#include "sleepspike/curve.hpp"

using namespace sleepspike;

namespace {

// Plain int64 affine arithmetic, written independently of the library, for
// curves with p < 2^31.
struct Toy {
   std::int64_t p, a;

   std::int64_t md(std::int64_t v) const { return ((v % p) + p) % p; }
   std::int64_t pw(std::int64_t b, std::int64_t e) const {
      std::int64_t r = 1;
      b = md(b);
      while(e > 0) {
         if(e & 1) r = r * b % p;
         b = b * b % p;
         e >>= 1;
      }
      return r;
   }
   std::int64_t inv(std::int64_t v) const { return pw(v, p - 2); }

   using Pt = std::optional<std::pair<std::int64_t, std::int64_t>>;

   Pt add(Pt P, Pt Q) const {
      if(!P) return Q;
      if(!Q) return P;
      auto [x1, y1] = *P;
      auto [x2, y2] = *Q;
      std::int64_t l;
      if(x1 == x2) {
         if(md(y1 + y2) == 0) return std::nullopt;
         l = md(3 * x1 % p * x1 + a) * inv(2 * y1) % p;
      } else {
         l = md(y2 - y1) * inv(md(x2 - x1)) % p;
      }
      const std::int64_t x3 = md(l * l - x1 - x2);
      const std::int64_t y3 = md(l * md(x1 - x3) - y1);
      return std::make_pair(x3, y3);
   }
};

Toy::Pt to_toy(const AffinePoint& a) {
   if(a.infinity) return std::nullopt;
   return std::make_pair(a.x.get_si(), a.y.get_si());
}

}  // namespace

TEST_SUITE("curve") {

TEST_CASE("built-in curves validate") {
   for(const auto& name : curve_names()) {
      if(name.find('<') != std::string::npos) continue;  // generated family, covered below
      CAPTURE(name);
      CHECK_NOTHROW(validate_curve(curve_by_name(name)));
   }
   CHECK(curve_p256().order_bits() == 256);
   CHECK(curve_secp128r1().order_bits() == 128);
   CHECK(curve_toy16().n < 65536);
   CHECK_THROWS_AS(curve_by_name("nope"), std::invalid_argument);
}

TEST_CASE("generated CM curves are valid and deterministic") {
   for(std::size_t bits : {48, 64, 96}) {
      const CurveParams c = make_cm_curve(bits, 0x5eed);
      CHECK_NOTHROW(validate_curve(c));
      CHECK(c.order_bits() == bits);
      const CurveParams again = make_cm_curve(bits, 0x5eed);
      CHECK(again.p == c.p);
      CHECK(again.g == c.g);
   }
   CHECK(curve_by_name("cm64").order_bits() == 64);
}

TEST_CASE("toy curve group order matches brute force") {
   const CurveParams& c = curve_toy16();
   const Nat total = brute_force_order(c.p, c.a, c.b);
   CHECK(total == c.n);  // prime order curve: the group is cyclic of order n
   CHECK(scalar_mul_naive(c.n, c.g, c).infinity);
}

TEST_CASE("group law matches an independent affine oracle on the toy curve") {
   const CurveParams& c = curve_toy16();
   const Toy t{c.p.get_si(), c.a.get_si()};
   Rng rng(11);
   for(int i = 0; i < 400; ++i) {
      const Nat k1 = random_below(rng, c.n - 1) + 1;
      const Nat k2 = random_below(rng, c.n - 1) + 1;
      const AffinePoint P = scalar_mul_naive(k1, c.g, c);
      const AffinePoint Q = scalar_mul_naive(k2, c.g, c);
      const auto expect_sum = t.add(to_toy(P), to_toy(Q));
      const auto expect_dbl = t.add(to_toy(P), to_toy(P));

      const auto jp = JacobianPoint::from_affine(P);
      const auto jq = JacobianPoint::from_affine(Q);
      CHECK(to_toy(to_affine(point_add(jp, jq, c), c)) == expect_sum);
      CHECK(to_toy(to_affine(mixed_add(jp, Q, c), c)) == expect_sum);
      CHECK(to_toy(to_affine(point_double(jp, c), c)) == expect_dbl);

      // non-trivial Z: work from a doubled representation
      const auto j2 = point_double(jp, c);
      CHECK(to_toy(to_affine(point_add(j2, jq, c), c)) == t.add(expect_dbl, to_toy(Q)));
      CHECK(to_toy(to_affine(mixed_add(j2, Q, c), c)) == t.add(expect_dbl, to_toy(Q)));
   }
}

TEST_CASE("scalar multiplication matches repeated oracle addition") {
   const CurveParams& c = curve_toy16();
   const Toy t{c.p.get_si(), c.a.get_si()};
   Toy::Pt acc;
   for(long k = 1; k < 3000; ++k) {
      acc = t.add(acc, to_toy(c.g));
      REQUIRE(to_toy(scalar_mul_naive(Nat(k), c.g, c)) == acc);
   }
}

TEST_CASE("identity handling") {
   const CurveParams& c = curve_p256();
   const auto zero = JacobianPoint::zero();
   const auto g = JacobianPoint::from_affine(c.g);
   // doubling the all-zero triple stays all-zero through the formula
   CHECK(point_double(zero, c).is_all_zero());
   CHECK(point_add(zero, g, c) == g);
   CHECK(point_add(g, zero, c) == g);
   CHECK(to_affine(zero, c).infinity);
   // P + (-P) and mixed P + (-P)
   CHECK(point_add(g, point_negate(g, c), c).is_identity());
   CHECK(mixed_add(g, affine_negate(c.g, c), c).is_identity());
   // the mixed adder has no identity branch: an all-zero accumulator does not
   // yield the addend, which is why the engines track the identity themselves
   CHECK_FALSE(to_affine(mixed_add(zero, c.g, c), c) == c.g);
   CHECK(scalar_mul_naive(Nat(0), c.g, c).infinity);
}

TEST_CASE("Hamming helpers") {
   const JacobianPoint p{Nat(0xff), Nat(1), Nat(3)};
   CHECK(hamming_weight(p) == 11);
   CHECK(hamming_distance(p, JacobianPoint::zero()) == 11);
   CHECK(hamming_weight(JacobianPoint::zero()) == 0);
}

TEST_CASE("point encoding round trip") {
   const CurveParams& c = curve_p256();
   const AffinePoint q = scalar_mul_naive(Nat(12345), c.g, c);
   const std::string hex = encode_point(q, c);
   CHECK(hex.size() == 2 + 128);
   CHECK(hex.substr(0, 2) == "04");
   CHECK(decode_point(hex, c) == q);
   CHECK(decode_point(encode_point(AffinePoint::at_infinity(), c), c).infinity);
   std::string bad = hex;
   bad.back() = bad.back() == '0' ? '1' : '0';
   CHECK_THROWS_AS(decode_point(bad, c), std::invalid_argument);
}

TEST_CASE("P-256 known multiple") {
   // 2G from the SEC 2 test vectors
   const CurveParams& c = curve_p256();
   const AffinePoint g2 = scalar_mul_naive(Nat(2), c.g, c);
   CHECK(nat_to_hex(g2.x, 64) == "7cf27b188d034f7e8a52380304b51ac3c08969e277f21b35a60b48fc47669978");
   CHECK(nat_to_hex(g2.y, 64) == "07775510db8ed040293d9ac69f7430dbba7dade63ce982299e04b79d227873d1");
}

TEST_CASE("random representations and cross-operation consistency") {
   Rng rng(12);
   for(const CurveParams* c : {&curve_toy16(), &curve_secp128r1(), &curve_p256()}) {
      for(int i = 0; i < 100; ++i) {
         const AffinePoint P = scalar_mul_naive(random_below(rng, c->n - 1) + 1, c->g, *c);
         const AffinePoint Q = scalar_mul_naive(random_below(rng, c->n - 1) + 1, c->g, *c);
         // same point with a random Z: (X Z^2, Y Z^3, Z)
         const Nat z = random_below(rng, c->p - 1) + 1;
         const Nat z2 = mod_mul(z, z, c->p);
         const JacobianPoint rp{mod_mul(P.x, z2, c->p), mod_mul(P.y, mod_mul(z2, z, c->p), c->p), z};
         CHECK(to_affine(rp, *c) == P);
         const JacobianPoint jp = JacobianPoint::from_affine(P);
         const JacobianPoint jq = JacobianPoint::from_affine(Q);
         CHECK(to_affine(point_double(rp, *c), *c) == to_affine(point_add(jp, jp, *c), *c));
         CHECK(to_affine(mixed_add(rp, Q, *c), *c) == to_affine(point_add(jp, jq, *c), *c));
         CHECK(to_affine(mixed_add(jp, P, *c), *c) == to_affine(point_double(jp, *c), *c));
         CHECK(on_curve(to_affine(point_double(rp, *c), *c), *c));
         // the all-zero operand is a bit-exact no-op
         CHECK(point_add(rp, JacobianPoint::zero(), *c) == rp);
         CHECK(point_add(JacobianPoint::zero(), rp, *c) == rp);
      }
   }
}

TEST_CASE("associativity against the affine oracle") {
   const CurveParams& c = curve_toy16();
   const Toy t{c.p.get_si(), c.a.get_si()};
   Rng rng(13);
   for(int i = 0; i < 50; ++i) {
      AffinePoint pts[3];
      for(auto& p : pts) p = scalar_mul_naive(random_below(rng, c.n), c.g, c);
      const auto j = [](const AffinePoint& p) { return p.infinity ? JacobianPoint::zero() : JacobianPoint::from_affine(p); };
      const auto left = to_affine(point_add(point_add(j(pts[0]), j(pts[1]), c), j(pts[2]), c), c);
      const auto right = to_affine(point_add(j(pts[0]), point_add(j(pts[1]), j(pts[2]), c), c), c);
      CHECK(left == right);
      CHECK(to_toy(left) == t.add(t.add(to_toy(pts[0]), to_toy(pts[1])), to_toy(pts[2])));
   }
}

TEST_CASE("inverse agrees with Fermat exponentiation") {
   const Nat p = curve_p256().n;
   Rng rng(14);
   CHECK(mod_inv(Nat(3), Nat(7)).value() == 5);
   CHECK(mod_inv(Nat(1), p).value() == 1);
   for(int i = 0; i < 1000; ++i) {
      const Nat a = random_below(rng, p - 1) + 1;
      CHECK(mod_inv(a, p).value() == mod_pow(a, p - 2, p));
   }
}

}

#include "sleepspike/curve.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace sleepspike {

namespace {

// Modular helpers over the curve prime; inputs are canonical residues.
struct Field {
   const Nat& p;

   Nat reduce(Nat v) const {
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
      return v;
   }
   Nat mul(const Nat& a, const Nat& b) const { return reduce(a * b); }
   Nat sqr(const Nat& a) const { return reduce(a * a); }
   Nat add(const Nat& a, const Nat& b) const {
      Nat r = a + b;
      if(r >= p) r -= p;
      return r;
   }
   Nat sub(const Nat& a, const Nat& b) const {
      Nat r = a - b;
      if(r < 0) r += p;
      return r;
   }
   Nat small(unsigned long k, const Nat& a) const { return reduce(a * k); }
};

}  // namespace

JacobianPoint JacobianPoint::from_affine(const AffinePoint& p) {
   if(p.infinity) {
      return zero();
   }
   return JacobianPoint{p.x, p.y, 1};
}

bool on_curve(const AffinePoint& pt, const CurveParams& c) {
   if(pt.infinity) {
      return true;
   }
   if(pt.x < 0 || pt.x >= c.p || pt.y < 0 || pt.y >= c.p) {
      return false;
   }
   const Field f{c.p};
   const Nat lhs = f.sqr(pt.y);
   const Nat rhs = f.add(f.add(f.mul(f.sqr(pt.x), pt.x), f.mul(c.a, pt.x)), c.b);
   return lhs == rhs;
}

void validate_curve(const CurveParams& c) {
   if(!is_probable_prime(c.p)) {
      throw std::invalid_argument(c.name + ": p is not prime");
   }
   const Nat disc = mod(4 * c.a * c.a * c.a + 27 * c.b * c.b, c.p);
   if(disc == 0) {
      throw std::invalid_argument(c.name + ": singular curve");
   }
   if(!on_curve(c.g, c) || c.g.infinity) {
      throw std::invalid_argument(c.name + ": base point not on curve");
   }
   if(!is_probable_prime(c.n)) {
      throw std::invalid_argument(c.name + ": group order is not prime");
   }
   if(!scalar_mul_naive(c.n, c.g, c).infinity) {
      throw std::invalid_argument(c.name + ": n*G is not the identity");
   }
}

JacobianPoint point_double(const JacobianPoint& pt, const CurveParams& c) {
   // The all-zero triple maps to itself through the formula: S = M = 0.
   const Field f{c.p};
   const Nat xx = f.sqr(pt.x);
   const Nat yy = f.sqr(pt.y);
   const Nat yyyy = f.sqr(yy);
   const Nat zz = f.sqr(pt.z);
   const Nat s = f.small(4, f.mul(pt.x, yy));
   const Nat m = f.add(f.small(3, xx), f.mul(c.a, f.sqr(zz)));
   JacobianPoint r;
   r.x = f.sub(f.sqr(m), f.small(2, s));
   r.y = f.sub(f.mul(m, f.sub(s, r.x)), f.small(8, yyyy));
   r.z = f.small(2, f.mul(pt.y, pt.z));
   if(r.z == 0) {
      return JacobianPoint::zero();
   }
   return r;
}

JacobianPoint point_add(const JacobianPoint& p, const JacobianPoint& q, const CurveParams& c) {
   if(q.is_identity()) {
      return p;
   }
   if(p.is_identity()) {
      return q;
   }
   const Field f{c.p};
   const Nat z1z1 = f.sqr(p.z);
   const Nat z2z2 = f.sqr(q.z);
   const Nat u1 = f.mul(p.x, z2z2);
   const Nat u2 = f.mul(q.x, z1z1);
   const Nat s1 = f.mul(p.y, f.mul(q.z, z2z2));
   const Nat s2 = f.mul(q.y, f.mul(p.z, z1z1));
   if(u1 == u2) {
      if(s1 == s2) {
         return point_double(p, c);
      }
      return JacobianPoint::zero();
   }
   const Nat h = f.sub(u2, u1);
   const Nat r = f.sub(s2, s1);
   const Nat hh = f.sqr(h);
   const Nat hhh = f.mul(h, hh);
   const Nat v = f.mul(u1, hh);
   JacobianPoint out;
   out.x = f.sub(f.sub(f.sqr(r), hhh), f.small(2, v));
   out.y = f.sub(f.mul(r, f.sub(v, out.x)), f.mul(s1, hhh));
   out.z = f.mul(h, f.mul(p.z, q.z));
   return out;
}

JacobianPoint mixed_add(const JacobianPoint& p, const AffinePoint& q, const CurveParams& c) {
   const Field f{c.p};
   const Nat z1z1 = f.sqr(p.z);
   const Nat u2 = f.mul(q.x, z1z1);
   const Nat s2 = f.mul(q.y, f.mul(p.z, z1z1));
   const Nat h = f.sub(u2, p.x);
   const Nat r = f.sub(s2, p.y);
   if(h == 0) {
      if(r == 0 && !p.is_identity()) {
         return point_double(p, c);
      }
      return JacobianPoint::zero();
   }
   const Nat hh = f.sqr(h);
   const Nat hhh = f.mul(h, hh);
   const Nat v = f.mul(p.x, hh);
   JacobianPoint out;
   out.x = f.sub(f.sub(f.sqr(r), hhh), f.small(2, v));
   out.y = f.sub(f.mul(r, f.sub(v, out.x)), f.mul(p.y, hhh));
   out.z = f.mul(h, p.z);
   return out;
}

JacobianPoint point_negate(const JacobianPoint& p, const CurveParams& c) {
   JacobianPoint r = p;
   if(r.y != 0) {
      r.y = c.p - r.y;
   }
   return r;
}

AffinePoint affine_negate(const AffinePoint& p, const CurveParams& c) {
   if(p.infinity || p.y == 0) {
      return p;
   }
   return AffinePoint{p.x, c.p - p.y, false};
}

AffinePoint to_affine(const JacobianPoint& p, const CurveParams& c) {
   if(p.is_identity()) {
      return AffinePoint::at_infinity();
   }
   const Field f{c.p};
   const auto zinv = mod_inv(p.z, c.p);
   if(!zinv) {
      throw std::logic_error("to_affine: Z not invertible");
   }
   const Nat zinv2 = f.sqr(*zinv);
   return AffinePoint{f.mul(p.x, zinv2), f.mul(p.y, f.mul(zinv2, *zinv)), false};
}

AffinePoint scalar_mul_naive(const Nat& k, const AffinePoint& p, const CurveParams& c) {
   if(k < 0) {
      throw std::invalid_argument("scalar_mul_naive: negative scalar");
   }
   const JacobianPoint base = JacobianPoint::from_affine(p);
   JacobianPoint acc = JacobianPoint::zero();
   for(std::size_t i = bit_length(k); i-- > 0;) {
      acc = point_double(acc, c);
      if(test_bit(k, i)) {
         acc = point_add(acc, base, c);
      }
   }
   return to_affine(acc, c);
}

std::size_t hamming_weight(const JacobianPoint& p) {
   return popcount(p.x) + popcount(p.y) + popcount(p.z);
}

std::size_t hamming_weight(const AffinePoint& p) {
   return popcount(p.x) + popcount(p.y);
}

std::size_t hamming_distance(const JacobianPoint& a, const JacobianPoint& b) {
   return hamming_distance(a.x, b.x) + hamming_distance(a.y, b.y) + hamming_distance(a.z, b.z);
}

std::string encode_point(const AffinePoint& p, const CurveParams& c) {
   if(p.infinity) {
      return "00";
   }
   const std::size_t w = c.field_bytes() * 2;
   return "04" + nat_to_hex(p.x, w) + nat_to_hex(p.y, w);
}

AffinePoint decode_point(std::string_view hex, const CurveParams& c) {
   if(hex == "00") {
      return AffinePoint::at_infinity();
   }
   const std::size_t w = c.field_bytes() * 2;
   if(hex.size() != 2 + 2 * w || hex.substr(0, 2) != "04") {
      throw std::invalid_argument("decode_point: expected uncompressed 04||x||y encoding");
   }
   AffinePoint p{nat_from_hex(hex.substr(2, w)), nat_from_hex(hex.substr(2 + w, w)), false};
   if(!on_curve(p, c)) {
      throw std::invalid_argument("decode_point: point not on curve");
   }
   return p;
}

// Named curves ---------------------------------------------------------------

const CurveParams& curve_p256() {
   static const CurveParams c = [] {
      CurveParams k;
      k.name = "p256";
      k.p = nat_from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
      k.a = k.p - 3;
      k.b = nat_from_hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b");
      k.g = AffinePoint{nat_from_hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
                        nat_from_hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
                        false};
      k.n = nat_from_hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
      return k;
   }();
   return c;
}

const CurveParams& curve_secp128r1() {
   static const CurveParams c = [] {
      CurveParams k;
      k.name = "secp128r1";
      k.p = nat_from_hex("fffffffdffffffffffffffffffffffff");
      k.a = nat_from_hex("fffffffdfffffffffffffffffffffffc");
      k.b = nat_from_hex("e87579c11079f43dd824993c2cee5ed3");
      k.g = AffinePoint{nat_from_hex("161ff7528b899b2d0c28607ca52c5b86"),
                        nat_from_hex("cf5ac8395bafeb13c02da292dded7a83"),
                        false};
      k.n = nat_from_hex("fffffffe0000000075a30d1b9038a115");
      return k;
   }();
   return c;
}

Nat brute_force_order(const Nat& p, const Nat& a, const Nat& b) {
   if(!p.fits_slong_p() || p > (1L << 30)) {
      throw std::invalid_argument("brute_force_order: field too large");
   }
   const long pp = p.get_si();
   const long aa = mod(a, p).get_si();
   const long bb = mod(b, p).get_si();
   // Squares table gives the number of roots of y^2 = v for each v.
   std::vector<int> roots(static_cast<std::size_t>(pp), 0);
   for(long y = 0; y < pp; ++y) {
      roots[static_cast<std::size_t>(y * y % pp)] += 1;
   }
   long count = 1;
   for(long x = 0; x < pp; ++x) {
      const long v = ((x * x % pp * x) % pp + aa * x % pp + bb) % pp;
      count += roots[static_cast<std::size_t>(v)];
   }
   return Nat(count);
}

CurveParams make_toy_curve(std::size_t bits) {
   if(bits < 4 || bits > 20) {
      throw std::invalid_argument("make_toy_curve: bits must be in [4, 20]");
   }
   for(Nat p = (Nat(1) << bits) - 1; p > 3; --p) {
      if(!is_probable_prime(p) || mod(p, 4) != 3) {
         continue;
      }
      const Nat a = p - 3;
      for(long b = 1; b < 200; ++b) {
         if(mod(4 * a * a * a + 27 * b * b, p) == 0) {
            continue;
         }
         const Nat n = brute_force_order(p, a, b);
         if(!is_probable_prime(n)) {
            continue;
         }
         CurveParams c;
         c.name = "toy" + std::to_string(bits + 1);
         c.p = p;
         c.a = a;
         c.b = b;
         c.n = n;
         for(Nat x = 1; x < p; ++x) {
            const Nat rhs = mod(x * x * x + a * x + b, p);
            if(auto y = mod_sqrt(rhs, p); y && *y != 0) {
               c.g = AffinePoint{x, Nat(*y < p - *y ? *y : p - *y), false};
               break;
            }
         }
         return c;
      }
   }
   throw std::runtime_error("make_toy_curve: no prime-order curve found");
}

const CurveParams& curve_toy16() {
   static const CurveParams c = [] {
      CurveParams k = make_toy_curve(15);
      k.name = "toy16";
      return k;
   }();
   return c;
}

CurveParams make_cm_curve(std::size_t bits, std::uint64_t seed) {
   if(bits < 16 || bits > 512) {
      throw std::invalid_argument("make_cm_curve: bits must be in [16, 512]");
   }
   Rng rng(mix_seed(seed, bits));
   const std::size_t half = bits / 2 + 1;
   for(;;) {
      Nat t = random_bits(rng, half);
      Nat v = random_bits(rng, half - 1);
      if(mpz_even_p(t.get_mpz_t()) != mpz_even_p(v.get_mpz_t())) {
         v += 1;
      }
      const Nat four_p = t * t + 3 * v * v;
      if(mod(four_p, 4) != 0) {
         continue;
      }
      const Nat p = four_p / 4;
      if(bit_length(p) != bits || !is_probable_prime(p)) {
         continue;
      }
      // The six twists of j = 0 have traces +-t, +-(t+3v)/2, +-(t-3v)/2.
      const Nat traces[] = {t, -t, (t + 3 * v) / 2, -(t + 3 * v) / 2, (t - 3 * v) / 2, -(t - 3 * v) / 2};
      for(const Nat& tr : traces) {
         const Nat n = p + 1 - tr;
         if(n == p || bit_length(n) != bits || !is_probable_prime(n)) {
            continue;
         }
         for(long b = 1; b < 1000; ++b) {
            CurveParams c;
            c.name = "cm" + std::to_string(bits);
            c.p = p;
            c.a = 0;
            c.b = b;
            c.n = n;
            bool have_point = false;
            for(Nat x = 1; x < 1000; ++x) {
               if(auto y = mod_sqrt(mod(x * x * x + b, p), p); y && *y != 0) {
                  c.g = AffinePoint{x, Nat(*y < p - *y ? *y : p - *y), false};
                  have_point = true;
                  break;
               }
            }
            if(have_point && scalar_mul_naive(n, c.g, c).infinity) {
               return c;
            }
         }
      }
   }
}

const CurveParams& curve_by_name(std::string_view name) {
   if(name == "p256" || name == "P-256" || name == "secp256r1") {
      return curve_p256();
   }
   if(name == "secp128r1") {
      return curve_secp128r1();
   }
   if(name == "toy16") {
      return curve_toy16();
   }
   if(name.size() > 2 && name.substr(0, 2) == "cm") {
      std::size_t bits = 0;
      try {
         bits = std::stoul(std::string(name.substr(2)));
      } catch(const std::exception&) {
         throw std::invalid_argument("unknown curve '" + std::string(name) + "'");
      }
      static std::mutex mu;
      static std::map<std::size_t, std::unique_ptr<CurveParams>> cache;
      std::lock_guard lock(mu);
      auto& slot = cache[bits];
      if(!slot) {
         slot = std::make_unique<CurveParams>(make_cm_curve(bits, 0x5eed));
      }
      return *slot;
   }
   throw std::invalid_argument("unknown curve '" + std::string(name) + "'");
}

std::vector<std::string> curve_names() {
   return {"p256", "secp128r1", "toy16", "cm<bits>"};
}

}  // namespace sleepspike

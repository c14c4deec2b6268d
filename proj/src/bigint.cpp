#include "sleepspike/bigint.hpp"

#include <stdexcept>

namespace sleepspike {

namespace {

int hex_digit(char c) {
   if(c >= '0' && c <= '9') return c - '0';
   if(c >= 'a' && c <= 'f') return c - 'a' + 10;
   if(c >= 'A' && c <= 'F') return c - 'A' + 10;
   return -1;
}

std::string_view strip_hex_prefix(std::string_view s) {
   if(s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
      s.remove_prefix(2);
   }
   return s;
}

}  // namespace

Nat nat_from_hex(std::string_view hex) {
   hex = strip_hex_prefix(hex);
   if(hex.empty()) {
      throw std::invalid_argument("empty hex string");
   }
   for(char c : hex) {
      if(hex_digit(c) < 0) {
         throw std::invalid_argument("invalid hex digit in '" + std::string(hex) + "'");
      }
   }
   return Nat(std::string(hex), 16);
}

std::string nat_to_hex(const Nat& v, std::size_t width) {
   if(v < 0) {
      throw std::invalid_argument("nat_to_hex: negative value");
   }
   std::string s = v.get_str(16);
   if(s.size() < width) {
      s.insert(0, width - s.size(), '0');
   }
   return s;
}

Nat nat_from_bytes(std::span<const std::uint8_t> be) {
   Nat r;
   if(!be.empty()) {
      mpz_import(r.get_mpz_t(), be.size(), 1, 1, 1, 0, be.data());
   }
   return r;
}

Bytes nat_to_bytes(const Nat& v, std::size_t len) {
   if(v < 0) {
      throw std::invalid_argument("nat_to_bytes: negative value");
   }
   const std::size_t need = (bit_length(v) + 7) / 8;
   if(need > len) {
      throw std::invalid_argument("nat_to_bytes: value does not fit");
   }
   Bytes out(len, 0);
   if(need > 0) {
      std::size_t written = 0;
      mpz_export(out.data() + (len - need), &written, 1, 1, 1, 0, v.get_mpz_t());
   }
   return out;
}

Bytes bytes_from_hex(std::string_view hex) {
   hex = strip_hex_prefix(hex);
   if(hex.size() % 2 != 0) {
      throw std::invalid_argument("hex string has odd length");
   }
   Bytes out(hex.size() / 2);
   for(std::size_t i = 0; i < out.size(); ++i) {
      const int hi = hex_digit(hex[2 * i]);
      const int lo = hex_digit(hex[2 * i + 1]);
      if(hi < 0 || lo < 0) {
         throw std::invalid_argument("invalid hex digit");
      }
      out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
   }
   return out;
}

std::string bytes_to_hex(std::span<const std::uint8_t> b) {
   static constexpr char digits[] = "0123456789abcdef";
   std::string s;
   s.reserve(b.size() * 2);
   for(auto x : b) {
      s.push_back(digits[x >> 4]);
      s.push_back(digits[x & 0xf]);
   }
   return s;
}

std::size_t bit_length(const Nat& v) {
   if(v == 0) {
      return 0;
   }
   return mpz_sizeinbase(v.get_mpz_t(), 2);
}

bool test_bit(const Nat& v, std::size_t i) {
   return mpz_tstbit(v.get_mpz_t(), i) != 0;
}

std::size_t popcount(const Nat& v) {
   if(v < 0) {
      throw std::invalid_argument("popcount: negative value");
   }
   return mpz_popcount(v.get_mpz_t());
}

std::size_t hamming_distance(const Nat& a, const Nat& b) {
   Nat x = a ^ b;
   return popcount(x);
}

Nat mod(const Nat& a, const Nat& m) {
   Nat r;
   mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
   return r;
}

Nat mod_mul(const Nat& a, const Nat& b, const Nat& m) {
   Nat r = a * b;
   mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
   return r;
}

Nat mod_pow(const Nat& base, const Nat& exp, const Nat& m) {
   Nat r;
   mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
   return r;
}

std::optional<Nat> mod_inv(const Nat& a, const Nat& m) {
   if(m <= 1) {
      return std::nullopt;
   }
   // Invariant: old_r = old_s * a (mod m), r = s * a (mod m).
   Nat old_r = mod(a, m);
   Nat r = m;
   Nat old_s = 1;
   Nat s = 0;
   if(old_r == 0) {
      return std::nullopt;
   }
   while(r != 0) {
      Nat q;
      mpz_fdiv_q(q.get_mpz_t(), old_r.get_mpz_t(), r.get_mpz_t());
      Nat tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s;
      old_s = s;
      s = tmp;
   }
   if(old_r != 1) {
      return std::nullopt;
   }
   return mod(old_s, m);
}

std::optional<Nat> mod_sqrt(const Nat& a_in, const Nat& p) {
   const Nat a = mod(a_in, p);
   if(a == 0) {
      return Nat(0);
   }
   if(mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) {
      return std::nullopt;
   }
   if(mod(p, 4) == 3) {
      return mod_pow(a, (p + 1) / 4, p);
   }
   // Tonelli-Shanks
   Nat q = p - 1;
   unsigned long s = 0;
   while(mpz_even_p(q.get_mpz_t())) {
      q /= 2;
      ++s;
   }
   Nat z = 2;
   while(mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) {
      ++z;
   }
   Nat c = mod_pow(z, q, p);
   Nat x = mod_pow(a, (q + 1) / 2, p);
   Nat t = mod_pow(a, q, p);
   unsigned long m = s;
   while(t != 1) {
      unsigned long i = 0;
      Nat t2 = t;
      while(t2 != 1) {
         t2 = mod_mul(t2, t2, p);
         ++i;
      }
      Nat b = c;
      for(unsigned long j = 0; j + 1 < m - i; ++j) {
         b = mod_mul(b, b, p);
      }
      x = mod_mul(x, b, p);
      c = mod_mul(b, b, p);
      t = mod_mul(t, c, p);
      m = i;
   }
   return x;
}

bool is_probable_prime(const Nat& v) {
   return mpz_probab_prime_p(v.get_mpz_t(), 40) != 0;
}

Bytes random_bytes(Rng& rng, std::size_t len) {
   Bytes out(len);
   std::size_t i = 0;
   while(i < len) {
      std::uint64_t w = rng();
      for(int j = 0; j < 8 && i < len; ++j, ++i) {
         out[i] = static_cast<std::uint8_t>(w >> (8 * j));
      }
   }
   return out;
}

Nat random_bits(Rng& rng, std::size_t bits) {
   if(bits == 0) {
      return 0;
   }
   const Bytes b = random_bytes(rng, (bits + 7) / 8);
   Nat v = nat_from_bytes(b);
   const std::size_t excess = b.size() * 8 - bits;
   return v >> excess;
}

Nat random_below(Rng& rng, const Nat& bound) {
   if(bound <= 0) {
      throw std::invalid_argument("random_below: bound must be positive");
   }
   const std::size_t bits = bit_length(bound);
   for(;;) {
      Nat v = random_bits(rng, bits);
      if(v < bound) {
         return v;
      }
   }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
   std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
   z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
   return z ^ (z >> 31);
}

}  // namespace sleepspike

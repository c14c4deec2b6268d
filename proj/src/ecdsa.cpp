#include "sleepspike/ecdsa.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "sleepspike/hash.hpp"

namespace sleepspike {

namespace {

// Leftmost qlen bits of a byte string as an integer.
Nat bits2int(std::span<const std::uint8_t> b, std::size_t qlen) {
   Nat v = nat_from_bytes(b);
   const std::size_t blen = b.size() * 8;
   if(blen > qlen) {
      v >>= (blen - qlen);
   }
   return v;
}

Bytes concat(std::initializer_list<std::span<const std::uint8_t>> parts) {
   Bytes out;
   for(auto p : parts) {
      out.insert(out.end(), p.begin(), p.end());
   }
   return out;
}

}  // namespace

PrivateKey generate_key(const CurveParams& c, Rng& rng) {
   return PrivateKey{random_below(rng, c.n - 1) + 1};
}

PublicKey public_key(const PrivateKey& key, const CurveParams& c) {
   if(key.d <= 0 || key.d >= c.n) {
      throw std::invalid_argument("public_key: private scalar out of range");
   }
   return PublicKey{scalar_mul_naive(key.d, c.g, c)};
}

Nat hash_message(std::span<const std::uint8_t> msg, const CurveParams& c) {
   const Digest d = sha256(msg);
   return mod(bits2int(d, c.order_bits()), c.n);
}

// Rfc6979Generator ------------------------------------------------------------

Rfc6979Generator::Rfc6979Generator(const PrivateKey& key, const Nat& h, const CurveParams& c) :
      m_n(c.n), m_qlen(c.order_bits()), m_k(32, 0x00), m_v(32, 0x01) {
   const std::size_t rlen = c.order_bytes();
   const Bytes x = nat_to_bytes(key.d, rlen);
   const Bytes hb = nat_to_bytes(mod(h, c.n), rlen);
   const std::uint8_t zero[1] = {0x00};
   const std::uint8_t one[1] = {0x01};
   m_k = hmac(concat({m_v, zero, x, hb}));
   m_v = hmac(m_v);
   m_k = hmac(concat({m_v, one, x, hb}));
   m_v = hmac(m_v);
}

std::vector<std::uint8_t> Rfc6979Generator::hmac(std::span<const std::uint8_t> data) const {
   const Digest d = hmac_sha256(m_k, data);
   return {d.begin(), d.end()};
}

Nat Rfc6979Generator::next() {
   const std::uint8_t zero[1] = {0x00};
   for(;;) {
      if(!m_first) {
         m_k = hmac(concat({m_v, zero}));
         m_v = hmac(m_v);
      }
      m_first = false;
      Bytes t;
      while(t.size() * 8 < m_qlen) {
         m_v = hmac(m_v);
         t.insert(t.end(), m_v.begin(), m_v.end());
      }
      const Nat k = bits2int(t, m_qlen);
      if(k >= 1 && k < m_n) {
         return k;
      }
   }
}

Nat rfc6979_nonce(const PrivateKey& key, const Nat& h, const CurveParams& c) {
   return Rfc6979Generator(key, h, c).next();
}

// Signing ---------------------------------------------------------------------

SignResult ecdsa_sign_detailed(std::span<const std::uint8_t> msg, const PrivateKey& key, const NoncePolicy& policy,
                               const CurveParams& c, Engine engine, ActivityTrace* probe) {
   if(key.d <= 0 || key.d >= c.n) {
      throw std::invalid_argument("ecdsa_sign: private scalar out of range");
   }
   const Nat h = hash_message(msg, c);
   std::optional<Rfc6979Generator> gen;
   if(std::holds_alternative<Rfc6979Nonce>(policy)) {
      gen.emplace(key, h, c);
   }
   for(;;) {
      Nat k;
      if(gen) {
         k = gen->next();
      } else {
         k = std::get<InjectedNonce>(policy).k;
         if(k <= 0 || k >= c.n) {
            throw std::invalid_argument("ecdsa_sign: injected nonce must lie in [1, n-1]");
         }
      }
      const AffinePoint kg = engine_base_mul(engine, k, c, probe);
      const Nat r = mod(kg.x, c.n);
      Nat s = 0;
      if(r != 0) {
         const Nat kinv = *mod_inv(k, c.n);
         s = mod_mul(kinv, mod(h + mod_mul(key.d, r, c.n), c.n), c.n);
      }
      if(r != 0 && s != 0) {
         return SignResult{Signature{r, s}, k, h};
      }
      if(!gen) {
         throw std::invalid_argument("ecdsa_sign: injected nonce yields r = 0 or s = 0");
      }
   }
}

Signature ecdsa_sign(std::span<const std::uint8_t> msg, const PrivateKey& key, const NoncePolicy& policy,
                     const CurveParams& c, Engine engine, ActivityTrace* probe) {
   return ecdsa_sign_detailed(msg, key, policy, c, engine, probe).sig;
}

bool ecdsa_verify_hash(const Nat& h, const Signature& sig, const PublicKey& pub, const CurveParams& c) {
   if(sig.r <= 0 || sig.r >= c.n || sig.s <= 0 || sig.s >= c.n) {
      return false;
   }
   if(pub.q.infinity || !on_curve(pub.q, c)) {
      return false;
   }
   const Nat w = *mod_inv(sig.s, c.n);
   const Nat u1 = mod_mul(mod(h, c.n), w, c.n);
   const Nat u2 = mod_mul(sig.r, w, c.n);
   const JacobianPoint a = JacobianPoint::from_affine(scalar_mul_naive(u1, c.g, c));
   const JacobianPoint b = JacobianPoint::from_affine(scalar_mul_naive(u2, pub.q, c));
   const AffinePoint x = to_affine(point_add(a, b, c), c);
   if(x.infinity) {
      return false;
   }
   return mod(x.x, c.n) == sig.r;
}

bool ecdsa_verify(std::span<const std::uint8_t> msg, const Signature& sig, const PublicKey& pub, const CurveParams& c) {
   return ecdsa_verify_hash(hash_message(msg, c), sig, pub, c);
}

Nat recover_key_known_nonce(const Signature& sig, const Nat& h, const Nat& k, const CurveParams& c) {
   const auto rinv = mod_inv(sig.r, c.n);
   if(!rinv) {
      throw std::invalid_argument("recover_key_known_nonce: r is not invertible");
   }
   const Nat d = mod_mul(mod(mod_mul(sig.s, k, c.n) - h, c.n), *rinv, c.n);
   if(d == 0) {
      throw std::invalid_argument("recover_key_known_nonce: degenerate key d = 0");
   }
   return d;
}

// Message search --------------------------------------------------------------

std::string_view zero_end_name(ZeroEnd e) {
   return e == ZeroEnd::leading ? "leading" : "trailing";
}

ZeroEnd zero_end_from_name(std::string_view name) {
   if(name == "leading") return ZeroEnd::leading;
   if(name == "trailing") return ZeroEnd::trailing;
   throw std::invalid_argument("zero end must be 'leading' or 'trailing'");
}

SearchResult search_messages(std::size_t target_zero_bits, std::size_t count, ZeroEnd end, const PrivateKey& key,
                             const CurveParams& c, Rng& rng, std::size_t budget) {
   SearchResult out;
   const ScanOrder order = end == ZeroEnd::leading ? ScanOrder::msb_first : ScanOrder::lsb_first;
   while(out.found.size() < count) {
      if(out.draws >= budget) {
         out.feasible = false;
         break;
      }
      ++out.draws;
      Bytes m = random_bytes(rng, 32);
      const Nat k = rfc6979_nonce(key, hash_message(m, c), c);
      const std::size_t z = zero_bits(k, order, c.order_bits());
      if(z >= target_zero_bits) {
         out.found.push_back(FoundMessage{std::move(m), k, z});
      }
   }
   return out;
}

// Files -------------------------------------------------------------------------

void write_key_file(std::ostream& os, const PrivateKey& key, const CurveParams& c) {
   os << c.name << '\n' << nat_to_hex(key.d, c.order_bytes() * 2) << '\n' << encode_point(public_key(key, c).q, c) << '\n';
}

std::pair<const CurveParams*, PrivateKey> read_key_file(std::istream& is) {
   std::string name;
   std::string hex;
   if(!std::getline(is, name) || !std::getline(is, hex)) {
      throw std::invalid_argument("key file: expected curve name and private key lines");
   }
   const CurveParams& c = curve_by_name(name);
   PrivateKey key{nat_from_hex(hex)};
   if(key.d <= 0 || key.d >= c.n) {
      throw std::invalid_argument("key file: private scalar out of range");
   }
   std::string pub;
   if(std::getline(is, pub) && !pub.empty()) {
      if(!(decode_point(pub, c) == public_key(key, c).q)) {
         throw std::invalid_argument("key file: public key does not match private key");
      }
   }
   return {&c, key};
}

std::string signature_to_hex(const Signature& sig, const CurveParams& c) {
   const std::size_t w = c.order_bytes() * 2;
   return nat_to_hex(sig.r, w) + "," + nat_to_hex(sig.s, w);
}

}  // namespace sleepspike

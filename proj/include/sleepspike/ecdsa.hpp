#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sleepspike/curve.hpp"
#include "sleepspike/engines.hpp"

namespace sleepspike {

struct PrivateKey {
   Nat d;  ///< 1 <= d < n
};

struct PublicKey {
   AffinePoint q;
};

struct Signature {
   Nat r;
   Nat s;

   friend bool operator==(const Signature&, const Signature&) = default;
};

/// RFC 6979 deterministic nonce (HMAC-DRBG over SHA-256).
struct Rfc6979Nonce {};
/// Caller-chosen nonce in [1, n-1]; used to reach zero patterns that message
/// search cannot.
struct InjectedNonce {
   Nat k;
};
using NoncePolicy = std::variant<Rfc6979Nonce, InjectedNonce>;

PrivateKey generate_key(const CurveParams& c, Rng& rng);
PublicKey public_key(const PrivateKey& key, const CurveParams& c);

/// H(m): SHA-256 truncated to the leftmost lambda bits, reduced mod n.
Nat hash_message(std::span<const std::uint8_t> msg, const CurveParams& c);

/// HMAC-DRBG nonce stream of RFC 6979 section 3.2. next() yields the first
/// candidate in [1, n-1] and, on later calls, the retry candidates.
class Rfc6979Generator {
   public:
      Rfc6979Generator(const PrivateKey& key, const Nat& h, const CurveParams& c);

      Nat next();

   private:
      std::vector<std::uint8_t> hmac(std::span<const std::uint8_t> data) const;

      Nat m_n;
      std::size_t m_qlen;
      std::vector<std::uint8_t> m_k;
      std::vector<std::uint8_t> m_v;
      bool m_first = true;
};

Nat rfc6979_nonce(const PrivateKey& key, const Nat& h, const CurveParams& c);

struct SignResult {
   Signature sig;
   Nat k;  ///< nonce actually used
   Nat h;
};

/// ECDSA signing with [k]G computed by `engine`; the probe (if any) receives
/// the activity of the final, successful scalar multiplication.
/// Throws std::invalid_argument for an injected nonce outside [1, n-1] or one
/// that yields r = 0 or s = 0.
SignResult ecdsa_sign_detailed(std::span<const std::uint8_t> msg, const PrivateKey& key, const NoncePolicy& policy,
                               const CurveParams& c, Engine engine = Engine::w4_identity_table,
                               ActivityTrace* probe = nullptr);

Signature ecdsa_sign(std::span<const std::uint8_t> msg, const PrivateKey& key, const NoncePolicy& policy,
                     const CurveParams& c, Engine engine = Engine::w4_identity_table, ActivityTrace* probe = nullptr);

bool ecdsa_verify(std::span<const std::uint8_t> msg, const Signature& sig, const PublicKey& pub, const CurveParams& c);
bool ecdsa_verify_hash(const Nat& h, const Signature& sig, const PublicKey& pub, const CurveParams& c);

/// d = (s*k - h) * r^-1 mod n. Throws for r = 0 or a degenerate d = 0.
Nat recover_key_known_nonce(const Signature& sig, const Nat& h, const Nat& k, const CurveParams& c);

enum class ZeroEnd { leading, trailing };
std::string_view zero_end_name(ZeroEnd e);
ZeroEnd zero_end_from_name(std::string_view name);

struct FoundMessage {
   Bytes message;
   Nat k;
   std::size_t zero_bits = 0;
};

struct SearchResult {
   std::vector<FoundMessage> found;
   bool feasible = true;  ///< false when the budget ran out before `count` hits
   std::size_t draws = 0;
};

/// Draws random 32-byte messages until `count` of them have RFC 6979 nonces
/// with at least `target_zero_bits` zero bits at the given end, or `budget`
/// draws are spent.
SearchResult search_messages(std::size_t target_zero_bits, std::size_t count, ZeroEnd end, const PrivateKey& key,
                             const CurveParams& c, Rng& rng, std::size_t budget);

/// Key file: first line the curve name, second line the private scalar in
/// fixed-width lowercase hex, third line the public key (04||x||y).
void write_key_file(std::ostream& os, const PrivateKey& key, const CurveParams& c);
std::pair<const CurveParams*, PrivateKey> read_key_file(std::istream& is);

/// Fixed-width hex pair "r,s".
std::string signature_to_hex(const Signature& sig, const CurveParams& c);

}  // namespace sleepspike

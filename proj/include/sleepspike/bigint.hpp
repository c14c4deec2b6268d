#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace sleepspike {

/// Arbitrary-precision unsigned integer. Values are kept canonical by GMP;
/// negative values only appear transiently inside lattice code.
using Nat = mpz_class;

using Bytes = std::vector<std::uint8_t>;

/// Deterministic random source used throughout the lab.
using Rng = std::mt19937_64;

Nat nat_from_hex(std::string_view hex);
/// Lowercase hex, zero-padded to `width` digits when width > 0.
std::string nat_to_hex(const Nat& v, std::size_t width = 0);

Nat nat_from_bytes(std::span<const std::uint8_t> be);
/// Big-endian encoding padded to `len` bytes; throws if the value does not fit.
Bytes nat_to_bytes(const Nat& v, std::size_t len);

Bytes bytes_from_hex(std::string_view hex);
std::string bytes_to_hex(std::span<const std::uint8_t> b);

std::size_t bit_length(const Nat& v);
bool test_bit(const Nat& v, std::size_t i);
/// Hamming weight of a non-negative value.
std::size_t popcount(const Nat& v);
std::size_t hamming_distance(const Nat& a, const Nat& b);

/// Non-negative residue of a modulo m.
Nat mod(const Nat& a, const Nat& m);
Nat mod_mul(const Nat& a, const Nat& b, const Nat& m);
Nat mod_pow(const Nat& base, const Nat& exp, const Nat& m);

/// Inverse of a modulo m by the extended Euclidean algorithm. Returns nullopt
/// when gcd(a, m) != 1 or a == 0.
std::optional<Nat> mod_inv(const Nat& a, const Nat& m);

/// Square root modulo an odd prime, if one exists.
std::optional<Nat> mod_sqrt(const Nat& a, const Nat& p);

bool is_probable_prime(const Nat& v);

/// Uniform value in [0, bound).
Nat random_below(Rng& rng, const Nat& bound);
/// Uniform value with at most `bits` bits.
Nat random_bits(Rng& rng, std::size_t bits);
Bytes random_bytes(Rng& rng, std::size_t len);

/// SplitMix64 finalizer; used to derive independent per-item seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sleepspike

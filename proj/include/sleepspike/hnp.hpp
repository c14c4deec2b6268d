#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "sleepspike/ecdsa.hpp"

namespace sleepspike {

/// One modular relation k = u + t*d (mod n) whose nonce k is known to satisfy
/// 0 < k < 2^(lambda - ell).
struct HnpSample {
   Nat t;
   Nat u;
   int ell = 0;
};

struct HnpInstance {
   Nat n;
   std::size_t lambda = 0;
   std::vector<HnpSample> samples;
   /// Input positions dropped because s was not invertible.
   std::vector<std::size_t> skipped;
};

struct SignedHash {
   Signature sig;
   Nat h;
};

/// t = r/s, u = h/s (mod n). Signatures with non-invertible s are skipped and
/// listed in `skipped`.
HnpInstance build_instance(const std::vector<SignedHash>& sigs, const std::vector<int>& ells, const CurveParams& c);

/// Integer lattice basis; rows are the basis vectors.
struct LatticeBasis {
   std::vector<std::vector<Nat>> rows;

   std::size_t size() const { return rows.size(); }
};

/// The (d+2)-dimensional centered HNP embedding:
///   rows 0..d-1 : 2^(ell_i+1) * n * e_i
///   row d       : (2^(ell_i+1) * t_i ..., 1, 0)
///   row d+1     : (2^(ell_i+1) * u_i - 2^lambda ..., 0, 2^lambda)
/// The secret d appears as coordinate d of the short vector
/// (2^(ell_i+1) k_i - 2^lambda ..., d, 2^lambda). Requires at least 2 samples.
LatticeBasis build_lattice(const HnpInstance& inst);

struct LllParams {
   double delta = 0.99;
};

struct LllStats {
   std::size_t swaps = 0;
   std::size_t reductions = 0;
};

/// LLL reduction with exact integer Gram-Schmidt data (integral LLL).
/// Throws std::invalid_argument when the rows are linearly dependent or
/// delta is outside (0.25, 1).
LatticeBasis lll_reduce(const LatticeBasis& basis, const LllParams& params = {}, LllStats* stats = nullptr);

struct LllCheck {
   bool size_reduced = false;
   bool lovasz = false;
   /// Largest |mu_ij| over j < i, as a double for reporting.
   double max_mu = 0.0;

   bool ok() const { return size_reduced && lovasz; }
};

/// Exact check of |mu_ij| <= 1/2 and the Lovasz condition for every
/// consecutive pair.
LllCheck check_lll(const LatticeBasis& basis, double delta = 0.99);

/// Scans reduced rows for a coordinate-d candidate c (or n - c) with
/// [c]G = Q. Rows are visited in order, so ties favour lower indices.
std::optional<Nat> recover_key(const LatticeBasis& reduced, const HnpInstance& inst, const PublicKey& pub,
                               const CurveParams& c);

struct RecoveryResult {
   bool success = false;
   Nat key;
   std::size_t tries = 0;
   double seconds = 0.0;
};

/// ceil(lambda / ell) + 7.
std::size_t default_subset_size(std::size_t lambda, int ell);

/// Repeats {random subset of d_subset samples, build, reduce, recover} until
/// the candidate key verifies against `pub` or max_tries is reached.
RecoveryResult attack_with_resampling(const HnpInstance& inst, const PublicKey& pub, const CurveParams& c,
                                      std::size_t d_subset, std::size_t max_tries, Rng& rng,
                                      const LllParams& params = {});

/// Instance file: one sample per line, "t,u,ell". t and u are 0x-prefixed
/// fixed-width hex on output; decimal or 0x-hex is accepted on input. Lines
/// starting with '#' are comments.
void write_instance(std::ostream& os, const HnpInstance& inst);
HnpInstance read_instance(std::istream& is, const CurveParams& c);

}  // namespace sleepspike

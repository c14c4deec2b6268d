#pragma once

#include <string>
#include <vector>

#include "sleepspike/analysis.hpp"
#include "sleepspike/hnp.hpp"

namespace sleepspike {

/// Bit width of one class unit: 1, 4 or 6.
std::size_t grouping_unit(Grouping g);

/// Random nonce in [1, n-1] whose zero run at `end` is exactly class z, i.e.
/// has between z*unit and z*unit + unit - 1 zero bits. Throws
/// std::invalid_argument when the class cannot be reached on this curve.
Nat nonce_in_class(std::size_t z, Grouping g, ZeroEnd end, const CurveParams& c, Rng& rng);

/// Messages for classes z_min..z_max with per_class messages each, ids
/// "<z>-<i>", each signed with an injected nonce of the class.
std::vector<PlanMessage> class_messages(std::size_t z_min, std::size_t z_max, std::size_t per_class, Grouping g,
                                        ZeroEnd end, const CurveParams& c, Rng& rng);

/// `count` random 32-byte messages with RFC 6979 nonces, ids "0".."count-1".
std::vector<PlanMessage> random_messages(std::size_t count, Rng& rng);

/// Table 2 configurations.
struct Preset {
   std::string name;
   Engine engine;
   std::size_t traces;
   std::size_t iterations;
};
const std::vector<Preset>& presets();
const Preset& preset_by_name(std::string_view name);

struct DrillReport {
   bool success = false;
   Nat key;
   std::size_t tries = 0;
   double attack_seconds = 0.0;
   double total_seconds = 0.0;
   std::size_t signatures = 0;    ///< samples handed to the lattice stage
   std::size_t true_samples = 0;  ///< of those, nonces that really meet ell (evaluation only)
   std::size_t d_subset = 0;
};

/// Oracle-filtered chain: `signatures` messages signed with injected nonces
/// below 2^(lambda - ell), then attack_with_resampling over all of them.
struct OracleDrill {
   int ell = 20;
   std::size_t signatures = 45;
   std::size_t d_subset = 0;  ///< 0 = all signatures
   std::size_t max_tries = 1;
   std::uint64_t seed = 1;
};
DrillReport run_oracle_drill(const OracleDrill& cfg, const PrivateKey& key, const CurveParams& c);

/// Classifier chain: random candidate messages, simulated spikes, rank
/// selection, then attack_with_resampling on the selected signatures with the
/// claimed ell.
struct ClassifierDrill {
   int ell = 12;
   std::size_t candidates = 50000;
   std::size_t traces_per_message = 1;
   std::size_t iterations = 750;
   Engine engine = Engine::w4_identity_table;
   LeakageParams leakage;
   double margin = 1.5;
   std::size_t d_subset = 0;  ///< 0 = default_subset_size, capped at the selection size
   std::size_t max_tries = 200;
   std::uint64_t seed = 1;
};
DrillReport run_classifier_drill(const ClassifierDrill& cfg, const PrivateKey& key, const CurveParams& c);

}  // namespace sleepspike

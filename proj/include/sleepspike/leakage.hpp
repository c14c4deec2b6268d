#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sleepspike/ecdsa.hpp"

namespace sleepspike {

/// Spike model coefficients in arbitrary power units. The defaults are a
/// calibration chosen so class distributions overlap while class means
/// separate; they are not measured values.
struct LeakageParams {
   double beta0 = 1.0;
   double beta1 = 0.002;   ///< per bit of final accumulator Hamming weight
   double beta2 = 0.01;    ///< per unit of residual activity
   double sigma = 0.03;    ///< Gaussian measurement noise
   std::size_t residual_window = 64;
   double decay = 0.98;    ///< in (0, 1]

   /// Throws std::invalid_argument when an invariant is violated.
   void validate() const;
};

struct PlanMessage {
   std::string id;
   Bytes message;
   NoncePolicy policy = Rfc6979Nonce{};
};

struct ExperimentPlan {
   Engine engine = Engine::w4_identity_table;
   std::size_t traces = 1;
   std::size_t iterations = 1;
   /// Traces are assigned round-robin: trace t signs messages[t % size].
   std::vector<PlanMessage> messages;
   /// End of the nonce at which truth zero bits are counted.
   ZeroEnd zero_end = ZeroEnd::leading;
   std::uint64_t seed = 0;

   void validate() const;
};

struct SpikeRecord {
   std::size_t trace_id = 0;
   std::string message_id;
   Engine engine = Engine::w4_identity_table;
   std::size_t iterations = 1;
   double spike = 0.0;
   /// Evaluation-only label; attack code never reads it.
   std::optional<std::size_t> truth_zero_bits;
};

/// Decay-weighted mean of hw_acc + hd_acc + hw_selected over the last
/// residual_window records of `trace` repeated `iterations` times (records
/// before the first repetition count as zero), scaled by 1 - decay^iterations
/// so the footprint builds up over repetitions.
double residual_activity(const ActivityTrace& trace, std::size_t iterations, const LeakageParams& params);

/// beta0 + beta1 * final_snapshot_hw + beta2 * residual_activity + N(0, sigma).
double simulate_spike(const ActivityTrace& trace, std::size_t iterations, const LeakageParams& params, Rng& rng);

/// Signs each distinct message once (signing is deterministic, so every
/// repetition yields the same activity) and emits one record per trace.
/// Trace t draws its noise from the substream mix_seed(plan.seed, t), so
/// results do not depend on evaluation order.
std::vector<SpikeRecord> run_plan(const ExperimentPlan& plan, const PrivateKey& key, const CurveParams& c,
                                  const LeakageParams& params);

enum class Grouping { zero_nibbles, zero_bits, zero_chunks };
std::string_view grouping_name(Grouping g);
Grouping grouping_from_name(std::string_view name);

struct FigurePoint {
   std::size_t z = 0;
   double mean_spike = 0.0;
   double std_spike = 0.0;   ///< over the records of the class
   std::size_t count = 0;    ///< records of the class that were used
};

/// Groups records by truth class; each point is the mean of per-message mean
/// spikes over at most `messages_per_class` messages (0 = all), taken in
/// message id order. Classes between 0 and the largest observed class that
/// have no records are omitted and named in `warnings`. Throws
/// std::invalid_argument if a record lacks a truth label.
std::vector<FigurePoint> figure_series(const std::vector<SpikeRecord>& records, Grouping grouping,
                                       std::size_t messages_per_class = 4,
                                       std::vector<std::string>* warnings = nullptr);

void write_spike_csv(std::ostream& os, const std::vector<SpikeRecord>& records);
/// Throws std::invalid_argument with the line number on malformed input.
std::vector<SpikeRecord> read_spike_csv(std::istream& is);

void write_figure_csv(std::ostream& os, const std::vector<FigurePoint>& points);

/// Orders ids numerically where both are all digits, else lexicographically.
bool message_id_less(const std::string& a, const std::string& b);

}  // namespace sleepspike

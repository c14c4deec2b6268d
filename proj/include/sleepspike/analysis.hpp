#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sleepspike/leakage.hpp"

namespace sleepspike {

/// Sliding unweighted mean over `w` samples, valid windows only: the output
/// has v.size() - w + 1 entries. Throws std::invalid_argument if w == 0 or
/// v.size() < w.
std::vector<double> moving_average(const std::vector<double>& v, std::size_t w = 10);

/// Largest element. Throws std::invalid_argument on empty input.
double extract_peak(const std::vector<double>& filtered);

struct MessageSummary {
   std::string message_id;
   double mean_spike = 0.0;
   double std_spike = 0.0;  ///< sample standard deviation, 0 for one trace
   std::size_t n_traces = 0;
};

/// Per-message mean and standard deviation, ordered by message id.
std::vector<MessageSummary> summarize(const std::vector<SpikeRecord>& records);

enum class SelectionMode { rank, threshold };

struct SelectionConfig {
   int claimed_zero_bits = 12;
   /// 0 means 2^-claimed_zero_bits.
   double expected_prevalence = 0.0;
   double margin = 1.5;
   SelectionMode mode = SelectionMode::rank;
   /// Amplitude bound for threshold mode (strictly below).
   double threshold = 0.0;

   double prevalence() const;
   void validate() const;
};

/// Rank mode: the floor(count * prevalence * margin) lowest-mean messages.
/// Threshold mode: every message with mean below cfg.threshold. Either way the
/// result is ordered by ascending mean, ties by id; it may be empty.
std::vector<std::string> select_low_spike(const std::vector<MessageSummary>& summaries, const SelectionConfig& cfg);

struct RawTrace {
   std::vector<double> t;  ///< seconds, strictly increasing
   std::vector<double> v;  ///< volts
};

/// Two numeric columns (time, voltage) separated by a comma or whitespace.
/// One non-numeric header line is allowed; blank lines and '#' comments are
/// skipped. Throws std::invalid_argument naming the offending line.
RawTrace read_raw_trace(std::istream& is, std::size_t min_length = 10);
RawTrace read_raw_trace(const std::filesystem::path& path, std::size_t min_length = 10);
/// Writes "t,v" with a header and round-trip exact numbers.
void write_raw_trace(std::ostream& os, const RawTrace& trace);

/// Peak of the moving-average filtered voltage.
double trace_spike(const RawTrace& trace, std::size_t w = 10);

/// Reads a raw trace file and turns it into a record whose message id is the
/// file stem.
SpikeRecord ingest_raw(const std::filesystem::path& path, std::size_t w = 10);

void write_summary_csv(std::ostream& os, const std::vector<MessageSummary>& summaries);

}  // namespace sleepspike

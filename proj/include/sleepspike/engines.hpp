#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sleepspike/curve.hpp"

namespace sleepspike {

/// The three constant-time windowed multipliers under study.
///   w4_identity_table : fixed 4-bit window over a Jacobian table pc[0..15]
///                       with pc[0] the all-zero identity (RustCrypto style).
///   w4_qz_flag        : fixed 4-bit window over an affine window [1..15]P,
///                       all-zero accumulator tracked by a qz flag (BearSSL style).
///   w6_booth          : 6-bit Booth-recoded signed window over per-position
///                       base-point tables, low windows first (Go style).
enum class Engine { w4_identity_table, w4_qz_flag, w6_booth };

std::string_view engine_name(Engine e);
Engine engine_from_name(std::string_view name);
const std::array<Engine, 3>& all_engines();

/// Activity observed by the probe after one window of the main loop.
struct IterationActivity {
   int window_index = 0;
   /// Hamming weight of the accumulator (X, Y, Z) after the window.
   int hw_acc = 0;
   /// Hamming distance between the accumulator before and after the window.
   int hd_acc = 0;
   /// Hamming weight of the table entry selected in this window.
   int hw_selected = 0;
   /// The window's digit is zero.
   bool zero_window = false;
   /// Accumulator still holds the all-zero identity encoding. For w4_qz_flag
   /// this is the engine's qz flag after the window.
   bool acc_zero = false;
};

struct ActivityTrace {
   Engine engine = Engine::w4_identity_table;
   std::vector<IterationActivity> records;
   int final_snapshot_hw = 0;

   /// Sum of hw_acc + hd_acc over all records.
   long total_activity() const;
};

/// CSV with header engine,window_index,hw_acc,hd_acc,hw_selected,zero_window.
void write_activity_csv(std::ostream& os, const ActivityTrace& trace, bool header = true);

/// Windows processed by each engine for a group order of `order_bits` bits.
std::size_t window_count(Engine e, std::size_t order_bits);

// w4_identity_table ---------------------------------------------------------

/// pc[i] = [i]P in Jacobian form; pc[0] is the all-zero triple.
using WindowTable16 = std::array<JacobianPoint, 16>;
WindowTable16 make_window_table16(const AffinePoint& p, const CurveParams& c);

/// Left-to-right fixed 4-bit windows starting at the top nibble of the
/// byte-padded scalar: q = [16](q + pc[slot]) for all but the last window.
AffinePoint mul_w4_identity_table(const Nat& k, const AffinePoint& p, const CurveParams& c,
                                  ActivityTrace* probe = nullptr);

// w4_qz_flag ----------------------------------------------------------------

/// W[j] = [j + 1]P, j = 0..14.
using AffineWindow15 = std::array<AffinePoint, 15>;
AffineWindow15 make_affine_window15(const AffinePoint& p, const CurveParams& c);

/// Consumes the big-endian scalar two nibbles per byte: Q <- [16]Q, then a
/// masked lookup of [bits]P over all 15 entries, a mixed add, and the qz
/// copy-in. Returns the Jacobian accumulator unchanged (all-zero for k = 0).
JacobianPoint mul_w4_qz_flag(std::span<const std::uint8_t> k_be, const AffineWindow15& w, const CurveParams& c,
                             ActivityTrace* probe = nullptr);

// w6_booth ------------------------------------------------------------------

struct BoothDigit {
   int sel = 0;  ///< magnitude 0..32
   bool negative = false;

   int value() const { return negative ? -sel : sel; }
};

/// Booth recoding of an overlapping 7-bit window (six scalar bits plus the
/// borrow bit below). Throws std::out_of_range outside 0..127.
BoothDigit booth_recode_w6(unsigned window7);

/// The 7-bit window for position i: bits 6i-1 .. 6i+5 with an implicit zero
/// below bit 0.
unsigned booth_window(const Nat& k, std::size_t i);

/// tables[i][j] = [(j + 1) * 2^(6i)]G in affine form.
struct BoothTables {
   std::vector<std::array<AffinePoint, 32>> tables;
};
BoothTables make_booth_tables(const CurveParams& c);

/// Base-point multiplication by right-to-left Booth windows with a cumulative
/// zero mask and a final conditional move to the identity.
AffinePoint mul_w6_booth(const Nat& k, const CurveParams& c, const BoothTables& tables,
                         ActivityTrace* probe = nullptr);

/// Lazily built per-curve tables for base-point multiplication (thread safe).
struct BasePrecomp {
   AffineWindow15 window15;
   BoothTables booth;
};
const BasePrecomp& base_precomp(const CurveParams& c);

/// [k]G through the selected engine.
AffinePoint engine_base_mul(Engine e, const Nat& k, const CurveParams& c, ActivityTrace* probe = nullptr);

// Zero-window counting --------------------------------------------------------

enum class ScanOrder { msb_first, lsb_first };

/// Consecutive zero windows of the given width from the stated end. Width 4
/// uses the byte-padded nibble grid of the 4-bit engines; width 6 uses chunks
/// [6i, 6i + 6) of the order_bits-bit scalar. k = 0 yields the window total.
std::size_t leading_zero_windows(const Nat& k, std::size_t width, ScanOrder order, std::size_t order_bits);

/// Zero bits at the stated end of an order_bits-bit scalar.
std::size_t zero_bits(const Nat& k, ScanOrder order, std::size_t order_bits);

}  // namespace sleepspike

#include "sleepspike/engines.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>

namespace sleepspike {

std::string_view engine_name(Engine e) {
   switch(e) {
      case Engine::w4_identity_table:
         return "w4_identity_table";
      case Engine::w4_qz_flag:
         return "w4_qz_flag";
      case Engine::w6_booth:
         return "w6_booth";
   }
   return "unknown";
}

Engine engine_from_name(std::string_view name) {
   for(Engine e : all_engines()) {
      if(engine_name(e) == name) {
         return e;
      }
   }
   throw std::invalid_argument("unknown engine '" + std::string(name) + "'");
}

const std::array<Engine, 3>& all_engines() {
   static const std::array<Engine, 3> engines = {Engine::w4_identity_table, Engine::w4_qz_flag, Engine::w6_booth};
   return engines;
}

long ActivityTrace::total_activity() const {
   long total = 0;
   for(const auto& r : records) {
      total += r.hw_acc + r.hd_acc;
   }
   return total;
}

void write_activity_csv(std::ostream& os, const ActivityTrace& trace, bool header) {
   if(header) {
      os << "engine,window_index,hw_acc,hd_acc,hw_selected,zero_window\n";
   }
   for(const auto& r : trace.records) {
      os << engine_name(trace.engine) << ',' << r.window_index << ',' << r.hw_acc << ',' << r.hd_acc << ','
         << r.hw_selected << ',' << (r.zero_window ? 1 : 0) << '\n';
   }
}

std::size_t window_count(Engine e, std::size_t order_bits) {
   switch(e) {
      case Engine::w4_identity_table:
      case Engine::w4_qz_flag:
         return 2 * ((order_bits + 7) / 8);
      case Engine::w6_booth:
         // The top window's sign bit (6(W-1) + 5) must lie above the scalar.
         return (order_bits + 1 + 5) / 6;
   }
   return 0;
}

namespace {

void record(ActivityTrace* probe, int index, const JacobianPoint& before, const JacobianPoint& after,
            std::size_t hw_selected, bool zero_window, bool acc_zero) {
   if(probe == nullptr) {
      return;
   }
   IterationActivity a;
   a.window_index = index;
   a.hw_acc = static_cast<int>(hamming_weight(after));
   a.hd_acc = static_cast<int>(hamming_distance(before, after));
   a.hw_selected = static_cast<int>(hw_selected);
   a.zero_window = zero_window;
   a.acc_zero = acc_zero;
   probe->records.push_back(a);
   probe->final_snapshot_hw = a.hw_acc;
}

void start_probe(ActivityTrace* probe, Engine e, std::size_t windows) {
   if(probe != nullptr) {
      probe->engine = e;
      probe->records.clear();
      probe->records.reserve(windows);
      probe->final_snapshot_hw = 0;
   }
}

// Constant-time style select: every candidate is visited, the match is kept.
template <typename T>
void conditional_assign(T& dst, const T& src, bool choice) {
   if(choice) {
      dst = src;
   }
}

}  // namespace

// w4_identity_table ---------------------------------------------------------

WindowTable16 make_window_table16(const AffinePoint& p, const CurveParams& c) {
   WindowTable16 pc;
   pc[0] = JacobianPoint::zero();
   pc[1] = JacobianPoint::from_affine(p);
   for(std::size_t i = 2; i < 16; ++i) {
      pc[i] = (i % 2 == 0) ? point_double(pc[i / 2], c) : point_add(pc[i - 1], pc[1], c);
   }
   return pc;
}

AffinePoint mul_w4_identity_table(const Nat& k, const AffinePoint& p, const CurveParams& c, ActivityTrace* probe) {
   if(k < 0 || k >= c.n) {
      throw std::invalid_argument("mul_w4_identity_table: scalar out of range");
   }
   const WindowTable16 pc = make_window_table16(p, c);
   const std::size_t windows = window_count(Engine::w4_identity_table, c.order_bits());
   start_probe(probe, Engine::w4_identity_table, windows);

   JacobianPoint q = JacobianPoint::zero();
   std::size_t pos = windows * 4 - 4;
   for(int index = 0;; ++index) {
      const unsigned slot = static_cast<unsigned>(Nat((k >> pos) & 0xf).get_ui());
      JacobianPoint t = JacobianPoint::zero();
      for(unsigned i = 1; i < 16; ++i) {
         conditional_assign(t, pc[i], slot == i);
      }
      const JacobianPoint before = q;
      q = point_add(q, t, c);
      if(pos == 0) {
         record(probe, index, before, q, hamming_weight(t), slot == 0, q.is_all_zero());
         break;
      }
      q = point_double(point_double(point_double(point_double(q, c), c), c), c);
      record(probe, index, before, q, hamming_weight(t), slot == 0, q.is_all_zero());
      pos -= 4;
   }
   return to_affine(q, c);
}

// w4_qz_flag ----------------------------------------------------------------

AffineWindow15 make_affine_window15(const AffinePoint& p, const CurveParams& c) {
   AffineWindow15 w;
   const JacobianPoint base = JacobianPoint::from_affine(p);
   JacobianPoint acc = base;
   for(std::size_t j = 0; j < 15; ++j) {
      w[j] = to_affine(acc, c);
      acc = point_add(acc, base, c);
   }
   return w;
}

JacobianPoint mul_w4_qz_flag(std::span<const std::uint8_t> k_be, const AffineWindow15& w, const CurveParams& c,
                             ActivityTrace* probe) {
   start_probe(probe, Engine::w4_qz_flag, 2 * k_be.size());

   JacobianPoint q = JacobianPoint::zero();
   bool qz = true;
   int index = 0;
   for(std::uint8_t byte : k_be) {
      unsigned bk = byte;
      for(int half = 0; half < 2; ++half, ++index) {
         const JacobianPoint before = q;
         q = point_double(point_double(point_double(point_double(q, c), c), c), c);
         const unsigned bits = (bk >> 4) & 0x0f;
         const bool bnz = bits != 0;

         // Masked lookup: T stays all-zero when bits == 0.
         AffinePoint t{0, 0, false};
         for(unsigned n = 0; n < 15; ++n) {
            if(bits == n + 1) {
               t.x |= w[n].x;
               t.y |= w[n].y;
            }
         }
         const JacobianPoint u = mixed_add(q, t, c);

         // While qz is set Q is all-zero, so OR-ing T in with Z = 1 copies it.
         if(bnz && qz) {
            q.x |= t.x;
            q.y |= t.y;
            q.z |= 1;
         }
         if(bnz && !qz) {
            q = u;
         }
         qz = qz && !bnz;
         bk <<= 4;
         record(probe, index, before, q, hamming_weight(t), !bnz, qz);
      }
   }
   return q;
}

// w6_booth ------------------------------------------------------------------

BoothDigit booth_recode_w6(unsigned in) {
   if(in > 127) {
      throw std::out_of_range("booth_recode_w6: window must be in 0..127");
   }
   // s is all-ones when the top (sign) bit of the 7-bit window is set.
   const unsigned s = ~((in >> 6) - 1u);
   unsigned d = (1u << 7) - in - 1u;
   d = (d & s) | (in & ~s);
   d = (d >> 1) + (d & 1u);
   return BoothDigit{static_cast<int>(d), (s & 1u) != 0};
}

unsigned booth_window(const Nat& k, std::size_t i) {
   if(i == 0) {
      return static_cast<unsigned>(Nat((k << 1) & 0x7f).get_ui());
   }
   return static_cast<unsigned>(Nat((k >> (6 * i - 1)) & 0x7f).get_ui());
}

BoothTables make_booth_tables(const CurveParams& c) {
   const std::size_t windows = window_count(Engine::w6_booth, c.order_bits());
   BoothTables out;
   out.tables.resize(windows);
   JacobianPoint base = JacobianPoint::from_affine(c.g);
   for(std::size_t i = 0; i < windows; ++i) {
      JacobianPoint acc = base;
      for(std::size_t j = 0; j < 32; ++j) {
         out.tables[i][j] = to_affine(acc, c);
         acc = point_add(acc, base, c);
      }
      for(int d = 0; d < 6; ++d) {
         base = point_double(base, c);
      }
   }
   return out;
}

AffinePoint mul_w6_booth(const Nat& k, const CurveParams& c, const BoothTables& tables, ActivityTrace* probe) {
   if(k < 0 || k >= c.n) {
      throw std::invalid_argument("mul_w6_booth: scalar out of range");
   }
   const std::size_t windows = window_count(Engine::w6_booth, c.order_bits());
   if(tables.tables.size() != windows) {
      throw std::invalid_argument("mul_w6_booth: tables built for a different curve");
   }
   start_probe(probe, Engine::w6_booth, windows);

   auto select = [&](std::size_t i, const BoothDigit& digit) {
      AffinePoint t{0, 0, false};
      for(int j = 0; j < 32; ++j) {
         if(digit.sel == j + 1) {
            t.x |= tables.tables[i][j].x;
            t.y |= tables.tables[i][j].y;
         }
      }
      if(digit.negative && t.y != 0) {
         t.y = c.p - t.y;
      }
      return t;
   };

   BoothDigit digit = booth_recode_w6(booth_window(k, 0));
   AffinePoint t0 = select(0, digit);
   // Z is masked by the digit so the accumulator stays all-zero across
   // leading zero digits.
   JacobianPoint p{t0.x, t0.y, digit.sel != 0 ? Nat(1) : Nat(0)};
   bool nonzero_seen = digit.sel != 0;
   record(probe, 0, JacobianPoint::zero(), p, hamming_weight(t0), digit.sel == 0, p.is_all_zero());

   for(std::size_t i = 1; i < windows; ++i) {
      digit = booth_recode_w6(booth_window(k, i));
      t0 = select(i, digit);
      const JacobianPoint before = p;
      const JacobianPoint sum = mixed_add(p, t0, c);
      if(digit.sel != 0) {
         p = nonzero_seen ? sum : JacobianPoint{t0.x, t0.y, 1};
      }
      nonzero_seen = nonzero_seen || digit.sel != 0;
      record(probe, static_cast<int>(i), before, p, hamming_weight(t0), digit.sel == 0, p.is_all_zero());
   }
   if(!nonzero_seen) {
      p = JacobianPoint::zero();
   }
   return to_affine(p, c);
}

const BasePrecomp& base_precomp(const CurveParams& c) {
   static std::mutex mu;
   static std::map<std::pair<std::string, std::string>, std::unique_ptr<BasePrecomp>> cache;
   const auto key = std::make_pair(c.p.get_str(16), c.g.x.get_str(16) + ":" + c.n.get_str(16));
   std::lock_guard lock(mu);
   auto& slot = cache[key];
   if(!slot) {
      slot = std::make_unique<BasePrecomp>(BasePrecomp{make_affine_window15(c.g, c), make_booth_tables(c)});
   }
   return *slot;
}

AffinePoint engine_base_mul(Engine e, const Nat& k, const CurveParams& c, ActivityTrace* probe) {
   switch(e) {
      case Engine::w4_identity_table:
         return mul_w4_identity_table(k, c.g, c, probe);
      case Engine::w4_qz_flag: {
         if(k < 0 || k >= c.n) {
            throw std::invalid_argument("mul_w4_qz_flag: scalar out of range");
         }
         const Bytes kb = nat_to_bytes(k, c.order_bytes());
         return to_affine(mul_w4_qz_flag(kb, base_precomp(c).window15, c, probe), c);
      }
      case Engine::w6_booth:
         return mul_w6_booth(k, c, base_precomp(c).booth, probe);
   }
   throw std::invalid_argument("engine_base_mul: unknown engine");
}

// Zero-window counting --------------------------------------------------------

std::size_t leading_zero_windows(const Nat& k, std::size_t width, ScanOrder order, std::size_t order_bits) {
   if(width != 4 && width != 6) {
      throw std::invalid_argument("leading_zero_windows: width must be 4 or 6");
   }
   const std::size_t total = width == 4 ? 2 * ((order_bits + 7) / 8) : (order_bits + 5) / 6;
   const Nat mask = (Nat(1) << width) - 1;
   std::size_t count = 0;
   for(std::size_t i = 0; i < total; ++i) {
      const std::size_t w = order == ScanOrder::lsb_first ? i : total - 1 - i;
      if(Nat((k >> (w * width)) & mask) != 0) {
         break;
      }
      ++count;
   }
   return count;
}

std::size_t zero_bits(const Nat& k, ScanOrder order, std::size_t order_bits) {
   if(k == 0) {
      return order_bits;
   }
   if(order == ScanOrder::msb_first) {
      const std::size_t len = bit_length(k);
      return len >= order_bits ? 0 : order_bits - len;
   }
   return mpz_scan1(k.get_mpz_t(), 0);
}

}  // namespace sleepspike

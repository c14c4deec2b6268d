#include "sleepspike/drill.hpp"

#include <chrono>
#include <map>
#include <stdexcept>

namespace sleepspike {

std::size_t grouping_unit(Grouping g) {
   switch(g) {
      case Grouping::zero_bits:
         return 1;
      case Grouping::zero_nibbles:
         return 4;
      case Grouping::zero_chunks:
         return 6;
   }
   return 1;
}

Nat nonce_in_class(std::size_t z, Grouping g, ZeroEnd end, const CurveParams& c, Rng& rng) {
   const std::size_t unit = grouping_unit(g);
   const std::size_t bits = c.order_bits();
   const std::size_t lo = z * unit;
   const std::size_t hi = lo + unit;
   if(hi > bits) {
      throw std::invalid_argument("nonce_in_class: class " + std::to_string(z) + " exceeds the curve order");
   }
   for(int attempt = 0; attempt < 1000; ++attempt) {
      Nat k;
      if(end == ZeroEnd::leading) {
         // bit length in (bits - hi, bits - lo]
         const Nat floor = Nat(1) << (bits - hi);
         const Nat ceil = Nat(1) << (bits - lo);
         k = floor + random_below(rng, ceil - floor);
      } else {
         // lowest set bit in [lo, hi)
         const std::size_t tz = lo + static_cast<std::size_t>(random_below(rng, Nat(unit)).get_ui());
         const Nat odd = 2 * random_below(rng, Nat(1) << (bits - tz - 1)) + 1;
         k = odd << tz;
      }
      if(k >= 1 && k < c.n) {
         return k;
      }
   }
   throw std::invalid_argument("nonce_in_class: class " + std::to_string(z) + " unreachable below n");
}

std::vector<PlanMessage> class_messages(std::size_t z_min, std::size_t z_max, std::size_t per_class, Grouping g,
                                        ZeroEnd end, const CurveParams& c, Rng& rng) {
   std::vector<PlanMessage> out;
   for(std::size_t z = z_min; z <= z_max; ++z) {
      for(std::size_t i = 0; i < per_class; ++i) {
         PlanMessage m;
         m.id = std::to_string(z) + "-" + std::to_string(i);
         m.message = random_bytes(rng, 32);
         m.policy = InjectedNonce{nonce_in_class(z, g, end, c, rng)};
         out.push_back(std::move(m));
      }
   }
   return out;
}

std::vector<PlanMessage> random_messages(std::size_t count, Rng& rng) {
   std::vector<PlanMessage> out;
   out.reserve(count);
   for(std::size_t i = 0; i < count; ++i) {
      out.push_back(PlanMessage{std::to_string(i), random_bytes(rng, 32), Rfc6979Nonce{}});
   }
   return out;
}

const std::vector<Preset>& presets() {
   static const std::vector<Preset> table = {
      {"pi4-rustcrypto", Engine::w4_identity_table, 1000, 20},
      {"pi4-bearssl", Engine::w4_qz_flag, 1000, 750},
      {"pi4-gocrypto", Engine::w6_booth, 1000, 750},
      {"vf2-rustcrypto", Engine::w4_identity_table, 500, 20},
      {"vf2-bearssl", Engine::w4_qz_flag, 500, 250},
      {"vf2-gocrypto", Engine::w6_booth, 500, 1000},
   };
   return table;
}

const Preset& preset_by_name(std::string_view name) {
   for(const auto& p : presets()) {
      if(p.name == name) {
         return p;
      }
   }
   throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

namespace {

double since(std::chrono::steady_clock::time_point t0) {
   return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DrillReport run_oracle_drill(const OracleDrill& cfg, const PrivateKey& key, const CurveParams& c) {
   const auto t0 = std::chrono::steady_clock::now();
   const std::size_t bits = c.order_bits();
   if(cfg.ell <= 0 || static_cast<std::size_t>(cfg.ell) >= bits) {
      throw std::invalid_argument("oracle drill: ell must lie in [1, lambda)");
   }
   Rng rng(mix_seed(cfg.seed, 0));
   std::vector<SignedHash> sigs;
   std::vector<int> ells;
   const Nat bound = Nat(1) << (bits - static_cast<std::size_t>(cfg.ell));
   while(sigs.size() < cfg.signatures) {
      const Bytes msg = random_bytes(rng, 32);
      const Nat k = random_below(rng, bound - 1) + 1;
      try {
         const SignResult r = ecdsa_sign_detailed(msg, key, InjectedNonce{k}, c);
         sigs.push_back(SignedHash{r.sig, r.h});
         ells.push_back(cfg.ell);
      } catch(const std::invalid_argument&) {
         // r or s was zero for this nonce; draw another
      }
   }
   const HnpInstance inst = build_instance(sigs, ells, c);
   DrillReport rep;
   rep.signatures = inst.samples.size();
   rep.true_samples = inst.samples.size();
   rep.d_subset = cfg.d_subset == 0 ? inst.samples.size() : cfg.d_subset;
   Rng arng(mix_seed(cfg.seed, 1));
   const RecoveryResult rr =
      attack_with_resampling(inst, public_key(key, c), c, rep.d_subset, std::max<std::size_t>(1, cfg.max_tries), arng);
   rep.success = rr.success;
   rep.key = rr.key;
   rep.tries = rr.tries;
   rep.attack_seconds = rr.seconds;
   rep.total_seconds = since(t0);
   return rep;
}

DrillReport run_classifier_drill(const ClassifierDrill& cfg, const PrivateKey& key, const CurveParams& c) {
   const auto t0 = std::chrono::steady_clock::now();
   if(cfg.ell <= 0 || static_cast<std::size_t>(cfg.ell) >= c.order_bits()) {
      throw std::invalid_argument("classifier drill: ell must lie in [1, lambda)");
   }
   Rng rng(mix_seed(cfg.seed, 0));
   ExperimentPlan plan;
   plan.engine = cfg.engine;
   plan.iterations = cfg.iterations;
   plan.messages = random_messages(cfg.candidates, rng);
   plan.traces = cfg.candidates * cfg.traces_per_message;
   plan.seed = mix_seed(cfg.seed, 1);
   const auto records = run_plan(plan, key, c, cfg.leakage);

   SelectionConfig sel;
   sel.claimed_zero_bits = cfg.ell;
   sel.margin = cfg.margin;
   const auto chosen = select_low_spike(summarize(records), sel);

   std::map<std::string, const PlanMessage*> by_id;
   for(const auto& m : plan.messages) {
      by_id[m.id] = &m;
   }
   std::vector<SignedHash> sigs;
   std::vector<int> ells;
   DrillReport rep;
   for(const auto& id : chosen) {
      const SignResult r = ecdsa_sign_detailed(by_id.at(id)->message, key, Rfc6979Nonce{}, c);
      sigs.push_back(SignedHash{r.sig, r.h});
      ells.push_back(cfg.ell);
      if(zero_bits(r.k, ScanOrder::msb_first, c.order_bits()) >= static_cast<std::size_t>(cfg.ell)) {
         ++rep.true_samples;
      }
   }
   const HnpInstance inst = build_instance(sigs, ells, c);
   rep.signatures = inst.samples.size();
   if(inst.samples.size() < 2) {
      rep.total_seconds = since(t0);
      return rep;
   }
   const std::size_t wanted = cfg.d_subset != 0 ? cfg.d_subset : default_subset_size(c.order_bits(), cfg.ell);
   rep.d_subset = std::min(wanted, inst.samples.size());
   Rng arng(mix_seed(cfg.seed, 2));
   const RecoveryResult rr = attack_with_resampling(inst, public_key(key, c), c, rep.d_subset,
                                                    std::max<std::size_t>(1, cfg.max_tries), arng);
   rep.success = rr.success;
   rep.key = rr.key;
   rep.tries = rr.tries;
   rep.attack_seconds = rr.seconds;
   rep.total_seconds = since(t0);
   return rep;
}

}  // namespace sleepspike

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sleepspike/drill.hpp"
#include "sleepspike/leakage.hpp"

using namespace sleepspike;

namespace {

ActivityTrace trace_for(const Nat& k, Engine e, const CurveParams& c) {
   ActivityTrace t;
   engine_base_mul(e, k, c, &t);
   return t;
}

// Unroll the repetitions explicitly and weight the newest record by 1.
double residual_oracle(const ActivityTrace& t, std::size_t iterations, const LeakageParams& p) {
   std::vector<double> seq;
   for(std::size_t i = 0; i < iterations; ++i) {
      for(const auto& a : t.records) {
         seq.push_back(a.hw_acc + a.hd_acc + a.hw_selected);
      }
   }
   double num = 0, den = 0;
   for(std::size_t m = 0; m < p.residual_window; ++m) {
      const double w = std::pow(p.decay, static_cast<double>(m));
      if(m < seq.size()) num += w * seq[seq.size() - 1 - m];
      den += w;
   }
   const double build = p.decay < 1 ? 1 - std::pow(p.decay, static_cast<double>(iterations)) : 1;
   return build * num / den;
}

}  // namespace

TEST_SUITE("leakage") {

TEST_CASE("parameter validation") {
   LeakageParams p;
   CHECK_NOTHROW(p.validate());
   p.sigma = -1;
   CHECK_THROWS_AS(p.validate(), std::invalid_argument);
   p = {};
   p.decay = 0;
   CHECK_THROWS_AS(p.validate(), std::invalid_argument);
   p = {};
   p.residual_window = 0;
   CHECK_THROWS_AS(p.validate(), std::invalid_argument);
   ExperimentPlan plan;
   plan.messages.push_back({"a", Bytes{1}, Rfc6979Nonce{}});
   plan.traces = 0;
   CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}

TEST_CASE("residual activity matches an unrolled oracle") {
   const CurveParams& c = curve_secp128r1();
   Rng rng(31);
   for(int i = 0; i < 20; ++i) {
      const Nat k = random_below(rng, c.n);
      for(Engine e : all_engines()) {
         const ActivityTrace t = trace_for(k, e, c);
         for(std::size_t iters : {1u, 2u, 3u, 20u, 750u}) {
            for(std::size_t w : {1u, 16u, 64u, 200u}) {
               LeakageParams p;
               p.residual_window = w;
               p.decay = (i % 2) ? 0.98 : 1.0;
               CHECK(residual_activity(t, iters, p) == doctest::Approx(residual_oracle(t, iters, p)).epsilon(1e-12));
            }
         }
      }
   }
}

TEST_CASE("noise-free spikes are deterministic and separate quiet nonces") {
   const CurveParams& c = curve_p256();
   LeakageParams p;
   p.sigma = 0;
   Rng rng(32);
   for(Engine e : {Engine::w4_identity_table, Engine::w4_qz_flag}) {
      const ActivityTrace quiet = trace_for(Nat(1), e, c);
      const ActivityTrace busy = trace_for(random_below(rng, c.n), e, c);
      Rng a(1), b(2);
      CHECK(simulate_spike(busy, 750, p, a) == simulate_spike(busy, 750, p, b));
      CHECK(simulate_spike(quiet, 750, p, a) < simulate_spike(busy, 750, p, b));
   }
}

TEST_CASE("zero coefficients leave only the offset") {
   LeakageParams p;
   p.beta1 = p.beta2 = p.sigma = 0;
   p.beta0 = 1.25;
   Rng rng(1);
   const ActivityTrace t = trace_for(Nat(77777), Engine::w6_booth, curve_p256());
   CHECK(simulate_spike(t, 10, p, rng) == 1.25);
}

TEST_CASE("noise has the configured spread") {
   LeakageParams p;
   p.sigma = 0.05;
   const ActivityTrace t = trace_for(Nat(4242), Engine::w4_identity_table, curve_secp128r1());
   LeakageParams p0 = p;
   p0.sigma = 0;
   Rng z(0);
   const double centre = simulate_spike(t, 20, p0, z);
   Rng rng(33);
   double s = 0, s2 = 0;
   const int n = 20000;
   for(int i = 0; i < n; ++i) {
      const double d = simulate_spike(t, 20, p, rng) - centre;
      s += d;
      s2 += d * d;
   }
   CHECK(std::abs(s / n) < 0.002);
   CHECK(std::sqrt(s2 / n) == doctest::Approx(0.05).epsilon(0.03));
}

TEST_CASE("run_plan emits one record per trace, reproducibly") {
   const CurveParams& c = curve_p256();
   const PrivateKey key{Nat(31337)};
   Rng rng(34);
   ExperimentPlan plan;
   plan.engine = Engine::w4_qz_flag;
   plan.messages = class_messages(0, 5, 4, Grouping::zero_nibbles, ZeroEnd::leading, c, rng);
   plan.iterations = 20;
   plan.seed = 99;
   for(std::size_t traces : {1000u, 500u}) {
      plan.traces = traces;
      const auto recs = run_plan(plan, key, c, {});
      REQUIRE(recs.size() == traces);
      for(std::size_t t = 0; t < traces; ++t) {
         CHECK(recs[t].trace_id == t);
         CHECK(recs[t].message_id == plan.messages[t % plan.messages.size()].id);
         CHECK(recs[t].engine == Engine::w4_qz_flag);
         CHECK(recs[t].iterations == 20);
         REQUIRE(recs[t].truth_zero_bits.has_value());
         CHECK(*recs[t].truth_zero_bits / 4 == std::stoul(recs[t].message_id));
      }
      const auto again = run_plan(plan, key, c, {});
      for(std::size_t t = 0; t < traces; ++t) {
         CHECK(again[t].spike == recs[t].spike);
      }
   }
   // a prefix of a longer plan reproduces the shorter one
   plan.traces = 10;
   const auto shorter = run_plan(plan, key, c, {});
   plan.traces = 30;
   const auto longer = run_plan(plan, key, c, {});
   for(std::size_t t = 0; t < 10; ++t) {
      CHECK(shorter[t].spike == longer[t].spike);
   }
}

TEST_CASE("class means separate more with more iterations") {
   const CurveParams& c = curve_p256();
   const PrivateKey key{Nat(5)};
   LeakageParams p;
   p.sigma = 0;
   Rng rng(35);
   const auto msgs = class_messages(0, 4, 20, Grouping::zero_nibbles, ZeroEnd::leading, c, rng);
   auto gap = [&](std::size_t iters) {
      ExperimentPlan plan;
      plan.messages = msgs;
      plan.traces = msgs.size();
      plan.iterations = iters;
      const auto pts = figure_series(run_plan(plan, key, c, p), Grouping::zero_nibbles, 0);
      return pts.front().mean_spike - pts.back().mean_spike;
   };
   const double g1 = gap(1), g20 = gap(20), g750 = gap(750);
   CHECK(g1 > 0);
   CHECK(g20 > g1);
   CHECK(g750 > g20);
}

TEST_CASE("figure_series groups by class") {
   std::vector<SpikeRecord> recs;
   auto add = [&](std::string id, std::size_t zb, double v) {
      SpikeRecord r;
      r.trace_id = recs.size();
      r.message_id = std::move(id);
      r.spike = v;
      r.truth_zero_bits = zb;
      recs.push_back(r);
   };
   // class 0: messages a (1.0, 3.0) and b (5.0); class 2: message c
   add("a", 1, 1.0);
   add("a", 2, 3.0);
   add("b", 3, 5.0);
   add("c", 9, 7.0);
   std::vector<std::string> warn;
   auto pts = figure_series(recs, Grouping::zero_nibbles, 4, &warn);
   REQUIRE(pts.size() == 2);
   CHECK(pts[0].z == 0);
   CHECK(pts[0].mean_spike == doctest::Approx(3.5));  // mean of 2.0 and 5.0
   CHECK(pts[0].count == 3);
   CHECK(pts[0].std_spike == doctest::Approx(2.0));
   CHECK(pts[1].z == 2);
   CHECK(pts[1].std_spike == 0.0);
   REQUIRE(warn.size() == 1);
   CHECK(warn[0].find('1') != std::string::npos);

   pts = figure_series(recs, Grouping::zero_nibbles, 1);
   CHECK(pts[0].mean_spike == doctest::Approx(2.0));
   CHECK(pts[0].count == 2);

   pts = figure_series(recs, Grouping::zero_bits, 0);
   CHECK(pts.size() == 4);

   std::vector<SpikeRecord> one(recs.begin(), recs.begin() + 2);
   CHECK(figure_series(one, Grouping::zero_nibbles).size() == 1);

   recs[1].truth_zero_bits.reset();
   CHECK_THROWS_AS(figure_series(recs, Grouping::zero_nibbles), std::invalid_argument);
}

TEST_CASE("spike CSV round trip") {
   const CurveParams& c = curve_secp128r1();
   Rng rng(36);
   ExperimentPlan plan;
   plan.engine = Engine::w6_booth;
   plan.messages = class_messages(0, 2, 2, Grouping::zero_chunks, ZeroEnd::trailing, c, rng);
   plan.zero_end = ZeroEnd::trailing;
   plan.traces = 12;
   plan.iterations = 3;
   auto recs = run_plan(plan, PrivateKey{Nat(3)}, c, {});
   recs[3].truth_zero_bits.reset();
   std::stringstream ss;
   write_spike_csv(ss, recs);
   const auto back = read_spike_csv(ss);
   REQUIRE(back.size() == recs.size());
   for(std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(back[i].trace_id == recs[i].trace_id);
      CHECK(back[i].message_id == recs[i].message_id);
      CHECK(back[i].engine == recs[i].engine);
      CHECK(back[i].iterations == recs[i].iterations);
      CHECK(back[i].spike == recs[i].spike);
      CHECK(back[i].truth_zero_bits == recs[i].truth_zero_bits);
   }
   std::stringstream bad("trace_id,message_id,engine,iterations,spike,truth_zero_bits\n0,a,w6_booth,1,notanumber,\n");
   CHECK_THROWS_WITH_AS(read_spike_csv(bad), doctest::Contains("2"), std::invalid_argument);
}

TEST_CASE("message id ordering") {
   CHECK(message_id_less("2", "10"));
   CHECK_FALSE(message_id_less("10", "2"));
   CHECK(message_id_less("a", "b"));
   CHECK(message_id_less("0-1", "0-2"));
}

}

#include "sleepspike/leakage.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sleepspike {

void LeakageParams::validate() const {
   if(!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw std::invalid_argument("leakage: sigma must be >= 0");
   }
   if(residual_window < 1) {
      throw std::invalid_argument("leakage: residual_window must be >= 1");
   }
   if(!(beta1 >= 0.0) || !(beta2 >= 0.0)) {
      throw std::invalid_argument("leakage: beta1 and beta2 must be >= 0");
   }
   if(!(decay > 0.0 && decay <= 1.0)) {
      throw std::invalid_argument("leakage: decay must lie in (0, 1]");
   }
   if(!std::isfinite(beta0)) {
      throw std::invalid_argument("leakage: beta0 must be finite");
   }
}

void ExperimentPlan::validate() const {
   if(traces < 1) {
      throw std::invalid_argument("plan: traces must be >= 1");
   }
   if(iterations < 1) {
      throw std::invalid_argument("plan: iterations must be >= 1");
   }
   if(messages.empty()) {
      throw std::invalid_argument("plan: no messages");
   }
}

double residual_activity(const ActivityTrace& trace, std::size_t iterations, const LeakageParams& params) {
   const std::size_t r = trace.records.size();
   if(r == 0) {
      throw std::invalid_argument("residual_activity: empty trace");
   }
   if(iterations < 1) {
      throw std::invalid_argument("residual_activity: iterations must be >= 1");
   }
   const std::size_t available = r * std::min<std::size_t>(iterations, params.residual_window / r + 1);
   double num = 0.0;
   double den = 0.0;
   double w = 1.0;
   for(std::size_t age = 0; age < params.residual_window; ++age) {
      if(age < available) {
         const auto& a = trace.records[r - 1 - age % r];
         num += w * static_cast<double>(a.hw_acc + a.hd_acc + a.hw_selected);
      }
      den += w;
      w *= params.decay;
   }
   const double build_up = params.decay < 1.0 ? 1.0 - std::pow(params.decay, static_cast<double>(iterations)) : 1.0;
   return build_up * num / den;
}

double simulate_spike(const ActivityTrace& trace, std::size_t iterations, const LeakageParams& params, Rng& rng) {
   double v = params.beta0 + params.beta1 * trace.final_snapshot_hw +
              params.beta2 * residual_activity(trace, iterations, params);
   if(params.sigma > 0.0) {
      v += std::normal_distribution<double>(0.0, params.sigma)(rng);
   }
   return v;
}

std::vector<SpikeRecord> run_plan(const ExperimentPlan& plan, const PrivateKey& key, const CurveParams& c,
                                  const LeakageParams& params) {
   plan.validate();
   params.validate();
   struct Signed {
      ActivityTrace trace;
      std::size_t zero_bits = 0;
   };
   const ScanOrder order = plan.zero_end == ZeroEnd::leading ? ScanOrder::msb_first : ScanOrder::lsb_first;
   const std::size_t used = std::min(plan.messages.size(), plan.traces);
   std::vector<Signed> cache(used);
   for(std::size_t i = 0; i < used; ++i) {
      const auto& m = plan.messages[i];
      const SignResult sr = ecdsa_sign_detailed(m.message, key, m.policy, c, plan.engine, &cache[i].trace);
      cache[i].zero_bits = zero_bits(sr.k, order, c.order_bits());
   }
   std::vector<SpikeRecord> out;
   out.reserve(plan.traces);
   for(std::size_t t = 0; t < plan.traces; ++t) {
      const std::size_t mi = t % plan.messages.size();
      Rng rng(mix_seed(plan.seed, t));
      SpikeRecord rec;
      rec.trace_id = t;
      rec.message_id = plan.messages[mi].id;
      rec.engine = plan.engine;
      rec.iterations = plan.iterations;
      rec.spike = simulate_spike(cache[mi].trace, plan.iterations, params, rng);
      rec.truth_zero_bits = cache[mi].zero_bits;
      out.push_back(std::move(rec));
   }
   return out;
}

std::string_view grouping_name(Grouping g) {
   switch(g) {
      case Grouping::zero_nibbles:
         return "nibbles";
      case Grouping::zero_bits:
         return "bits";
      case Grouping::zero_chunks:
         return "chunks";
   }
   return "?";
}

Grouping grouping_from_name(std::string_view name) {
   if(name == "nibbles" || name == "zero_nibbles") return Grouping::zero_nibbles;
   if(name == "bits" || name == "zero_bits") return Grouping::zero_bits;
   if(name == "chunks" || name == "zero_chunks") return Grouping::zero_chunks;
   throw std::invalid_argument("grouping must be nibbles, bits or chunks");
}

bool message_id_less(const std::string& a, const std::string& b) {
   auto digits = [](const std::string& s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
   };
   if(digits(a) && digits(b)) {
      const auto za = a.find_first_not_of('0');
      const auto zb = b.find_first_not_of('0');
      const std::string ta = za == std::string::npos ? "" : a.substr(za);
      const std::string tb = zb == std::string::npos ? "" : b.substr(zb);
      if(ta.size() != tb.size()) {
         return ta.size() < tb.size();
      }
      if(ta != tb) {
         return ta < tb;
      }
   }
   return a < b;
}

namespace {

struct IdLess {
   bool operator()(const std::string& a, const std::string& b) const { return message_id_less(a, b); }
};

double mean_of(const std::vector<double>& v) {
   double s = 0.0;
   for(double x : v) s += x;
   return s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for a single value.
double std_of(const std::vector<double>& v) {
   if(v.size() < 2) {
      return 0.0;
   }
   const double m = mean_of(v);
   double s = 0.0;
   for(double x : v) s += (x - m) * (x - m);
   return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<FigurePoint> figure_series(const std::vector<SpikeRecord>& records, Grouping grouping,
                                       std::size_t messages_per_class, std::vector<std::string>* warnings) {
   const std::size_t width = grouping == Grouping::zero_nibbles ? 4 : grouping == Grouping::zero_chunks ? 6 : 1;
   std::map<std::size_t, std::map<std::string, std::vector<double>, IdLess>> classes;
   for(const auto& r : records) {
      if(!r.truth_zero_bits) {
         throw std::invalid_argument("figure_series: record " + std::to_string(r.trace_id) +
                                     " has no truth label; produce records in simulation mode");
      }
      classes[*r.truth_zero_bits / width][r.message_id].push_back(r.spike);
   }
   std::vector<FigurePoint> out;
   std::size_t expect = 0;
   for(const auto& [z, msgs] : classes) {
      for(; expect < z; ++expect) {
         if(warnings != nullptr) {
            warnings->push_back("class z=" + std::to_string(expect) + " has no records; omitted");
         }
      }
      expect = z + 1;
      std::vector<double> means;
      std::vector<double> all;
      for(const auto& [id, spikes] : msgs) {
         if(messages_per_class != 0 && means.size() == messages_per_class) {
            break;
         }
         means.push_back(mean_of(spikes));
         all.insert(all.end(), spikes.begin(), spikes.end());
      }
      out.push_back(FigurePoint{z, mean_of(means), std_of(all), all.size()});
   }
   return out;
}

namespace {

std::string fmt_double(double v) {
   char buf[64];
   const auto res = std::to_chars(buf, buf + sizeof(buf), v);
   return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
   std::vector<std::string> out;
   std::stringstream ss(line);
   std::string f;
   while(std::getline(ss, f, ',')) {
      out.push_back(f);
   }
   if(!line.empty() && line.back() == ',') {
      out.emplace_back();
   }
   return out;
}

double parse_double(const std::string& s) {
   double v = 0.0;
   const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
   if(res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + s + "'");
   }
   return v;
}

std::size_t parse_size(const std::string& s) {
   std::size_t v = 0;
   const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
   if(res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw std::invalid_argument("bad integer '" + s + "'");
   }
   return v;
}

const char* const kSpikeHeader = "trace_id,message_id,engine,iterations,spike,truth_zero_bits";

}  // namespace

void write_spike_csv(std::ostream& os, const std::vector<SpikeRecord>& records) {
   os << kSpikeHeader << '\n';
   for(const auto& r : records) {
      os << r.trace_id << ',' << r.message_id << ',' << engine_name(r.engine) << ',' << r.iterations << ','
         << fmt_double(r.spike) << ',';
      if(r.truth_zero_bits) {
         os << *r.truth_zero_bits;
      }
      os << '\n';
   }
}

std::vector<SpikeRecord> read_spike_csv(std::istream& is) {
   std::vector<SpikeRecord> out;
   std::string line;
   std::size_t lineno = 0;
   while(std::getline(is, line)) {
      ++lineno;
      if(!line.empty() && line.back() == '\r') {
         line.pop_back();
      }
      if(line.empty() || (lineno == 1 && line.rfind("trace_id", 0) == 0)) {
         continue;
      }
      const auto f = split_csv(line);
      try {
         if(f.size() != 6) {
            throw std::invalid_argument("expected 6 fields, got " + std::to_string(f.size()));
         }
         SpikeRecord r;
         r.trace_id = parse_size(f[0]);
         r.message_id = f[1];
         r.engine = engine_from_name(f[2]);
         r.iterations = parse_size(f[3]);
         r.spike = parse_double(f[4]);
         if(!f[5].empty()) {
            r.truth_zero_bits = parse_size(f[5]);
         }
         out.push_back(std::move(r));
      } catch(const std::exception& e) {
         throw std::invalid_argument("spike csv line " + std::to_string(lineno) + ": " + e.what());
      }
   }
   return out;
}

void write_figure_csv(std::ostream& os, const std::vector<FigurePoint>& points) {
   os << "z,mean_spike,std,count\n";
   for(const auto& p : points) {
      os << p.z << ',' << fmt_double(p.mean_spike) << ',' << fmt_double(p.std_spike) << ',' << p.count << '\n';
   }
}

}  // namespace sleepspike

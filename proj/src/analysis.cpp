#include "sleepspike/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace sleepspike {

std::vector<double> moving_average(const std::vector<double>& v, std::size_t w) {
   if(w == 0) {
      throw std::invalid_argument("moving_average: window must be >= 1");
   }
   if(v.size() < w) {
      throw std::invalid_argument("moving_average: input shorter than window");
   }
   // Each window is summed directly; a running sum would drift for long traces.
   std::vector<double> out(v.size() - w + 1);
   for(std::size_t i = 0; i < out.size(); ++i) {
      double s = 0.0;
      for(std::size_t j = 0; j < w; ++j) {
         s += v[i + j];
      }
      out[i] = s / static_cast<double>(w);
   }
   return out;
}

double extract_peak(const std::vector<double>& filtered) {
   if(filtered.empty()) {
      throw std::invalid_argument("extract_peak: empty input");
   }
   return *std::max_element(filtered.begin(), filtered.end());
}

std::vector<MessageSummary> summarize(const std::vector<SpikeRecord>& records) {
   std::map<std::string, std::vector<double>, bool (*)(const std::string&, const std::string&)> by_id(
      message_id_less);
   for(const auto& r : records) {
      by_id[r.message_id].push_back(r.spike);
   }
   std::vector<MessageSummary> out;
   for(const auto& [id, v] : by_id) {
      double m = 0.0;
      for(double x : v) m += x;
      m /= static_cast<double>(v.size());
      double s = 0.0;
      if(v.size() > 1) {
         for(double x : v) s += (x - m) * (x - m);
         s = std::sqrt(s / static_cast<double>(v.size() - 1));
      }
      out.push_back(MessageSummary{id, m, s, v.size()});
   }
   return out;
}

double SelectionConfig::prevalence() const {
   return expected_prevalence > 0.0 ? expected_prevalence : std::ldexp(1.0, -claimed_zero_bits);
}

void SelectionConfig::validate() const {
   const double p = prevalence();
   if(!(p > 0.0 && p <= 1.0)) {
      throw std::invalid_argument("selection: prevalence must lie in (0, 1]");
   }
   if(!(margin >= 1.0)) {
      throw std::invalid_argument("selection: margin must be >= 1");
   }
   if(claimed_zero_bits < 0) {
      throw std::invalid_argument("selection: claimed zero bits must be >= 0");
   }
}

std::vector<std::string> select_low_spike(const std::vector<MessageSummary>& summaries, const SelectionConfig& cfg) {
   cfg.validate();
   std::vector<const MessageSummary*> order;
   for(const auto& s : summaries) {
      order.push_back(&s);
   }
   std::sort(order.begin(), order.end(), [](const MessageSummary* a, const MessageSummary* b) {
      if(a->mean_spike != b->mean_spike) {
         return a->mean_spike < b->mean_spike;
      }
      return message_id_less(a->message_id, b->message_id);
   });
   std::size_t take = 0;
   if(cfg.mode == SelectionMode::rank) {
      // The small epsilon keeps exact products such as 160 * 1/16 from
      // rounding down.
      const double want = static_cast<double>(summaries.size()) * cfg.prevalence() * cfg.margin;
      take = std::min(summaries.size(), static_cast<std::size_t>(std::floor(want + 1e-9)));
   } else {
      while(take < order.size() && order[take]->mean_spike < cfg.threshold) {
         ++take;
      }
   }
   std::vector<std::string> out;
   for(std::size_t i = 0; i < take; ++i) {
      out.push_back(order[i]->message_id);
   }
   return out;
}

namespace {

bool parse_field(std::string_view s, double& out) {
   // from_chars rejects a leading '+', which some instruments emit.
   if(!s.empty() && s.front() == '+') {
      s.remove_prefix(1);
   }
   const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
   return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
   std::vector<std::string_view> out;
   std::size_t i = 0;
   auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == ';'; };
   while(i < line.size()) {
      while(i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if(i >= line.size()) break;
      std::size_t j = i;
      while(j < line.size() && !is_sep(line[j])) ++j;
      out.push_back(line.substr(i, j - i));
      while(j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
      if(j < line.size() && (line[j] == ',' || line[j] == ';')) ++j;
      i = j;
   }
   return out;
}

}  // namespace

RawTrace read_raw_trace(std::istream& is, std::size_t min_length) {
   RawTrace tr;
   std::string line;
   std::size_t lineno = 0;
   bool header_allowed = true;
   while(std::getline(is, line)) {
      ++lineno;
      if(!line.empty() && line.back() == '\r') {
         line.pop_back();
      }
      if(line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
         continue;
      }
      const auto f = split_fields(line);
      double t = 0.0;
      double v = 0.0;
      const bool numeric = f.size() == 2 && parse_field(f[0], t) && parse_field(f[1], v);
      if(!numeric) {
         if(header_allowed && tr.t.empty()) {
            header_allowed = false;
            continue;
         }
         throw std::invalid_argument("line " + std::to_string(lineno) + ": expected two numeric columns");
      }
      header_allowed = false;
      if(!tr.t.empty() && !(t > tr.t.back())) {
         throw std::invalid_argument("line " + std::to_string(lineno) + ": time is not strictly increasing");
      }
      tr.t.push_back(t);
      tr.v.push_back(v);
   }
   if(tr.t.empty()) {
      throw std::invalid_argument("raw trace has no samples");
   }
   if(tr.t.size() < min_length) {
      throw std::invalid_argument("raw trace has " + std::to_string(tr.t.size()) + " samples, need at least " +
                                  std::to_string(min_length));
   }
   return tr;
}

RawTrace read_raw_trace(const std::filesystem::path& path, std::size_t min_length) {
   std::ifstream in(path);
   if(!in) {
      throw std::invalid_argument("cannot open " + path.string());
   }
   return read_raw_trace(in, min_length);
}

void write_raw_trace(std::ostream& os, const RawTrace& trace) {
   os << "t,v\n";
   char buf[64];
   for(std::size_t i = 0; i < trace.t.size(); ++i) {
      auto r = std::to_chars(buf, buf + sizeof(buf), trace.t[i]);
      os.write(buf, r.ptr - buf);
      os << ',';
      r = std::to_chars(buf, buf + sizeof(buf), trace.v[i]);
      os.write(buf, r.ptr - buf);
      os << '\n';
   }
}

double trace_spike(const RawTrace& trace, std::size_t w) {
   return extract_peak(moving_average(trace.v, w));
}

SpikeRecord ingest_raw(const std::filesystem::path& path, std::size_t w) {
   SpikeRecord r;
   r.message_id = path.stem().string();
   r.spike = trace_spike(read_raw_trace(path, w), w);
   return r;
}

void write_summary_csv(std::ostream& os, const std::vector<MessageSummary>& summaries) {
   os << "message_id,mean_spike,std_spike,n_traces\n";
   char buf[64];
   for(const auto& s : summaries) {
      os << s.message_id << ',';
      auto r = std::to_chars(buf, buf + sizeof(buf), s.mean_spike);
      os.write(buf, r.ptr - buf);
      os << ',';
      r = std::to_chars(buf, buf + sizeof(buf), s.std_spike);
      os.write(buf, r.ptr - buf);
      os << ',' << s.n_traces << '\n';
   }
}

}  // namespace sleepspike

// Command-line front end: keygen, search, simulate, figure, analyze, attack.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 attack found no key.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>

#include "sleepspike/drill.hpp"

namespace fs = std::filesystem;
using namespace sleepspike;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNotFound = 3;

struct UsageError : std::runtime_error {
   using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
   using std::runtime_error::runtime_error;
};
struct NotFound : std::runtime_error {
   using std::runtime_error::runtime_error;
};

// Writes through a temporary file in the target directory and renames it
// into place, so readers never see a partial file. "-" means stdout.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& fill) {
   if(path == "-") {
      fill(std::cout);
      std::cout.flush();
      return;
   }
   const fs::path target(path);
   const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
   {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if(!out) {
         throw DataError("cannot write " + tmp.string());
      }
      fill(out);
      out.flush();
      if(!out) {
         fs::remove(tmp);
         throw DataError("write failed for " + tmp.string());
      }
   }
   std::error_code ec;
   fs::rename(tmp, target, ec);
   if(ec) {
      fs::remove(tmp);
      throw DataError("cannot move output into " + path + ": " + ec.message());
   }
}

std::ifstream open_input(const std::string& path) {
   std::ifstream in(path);
   if(!in) {
      throw DataError("cannot open " + path);
   }
   return in;
}

template <typename T>
T as_data(const std::string& what, const std::function<T()>& fn) {
   try {
      return fn();
   } catch(const std::invalid_argument& e) {
      throw DataError(what + ": " + e.what());
   }
}

struct KeyOptions {
   std::string key_file;
   std::string curve = "p256";
   std::uint64_t seed = 1;
};

void add_key_options(CLI::App* sub, KeyOptions& k) {
   sub->add_option("--key", k.key_file, "Key file from keygen (default: derive a key from --curve and --seed)");
   sub->add_option("--curve", k.curve, "Curve when no key file is given")->capture_default_str();
   sub->add_option("--seed", k.seed, "Seed for all randomness")->capture_default_str();
}

std::pair<const CurveParams*, PrivateKey> load_key(const KeyOptions& k) {
   if(!k.key_file.empty()) {
      auto in = open_input(k.key_file);
      return as_data<std::pair<const CurveParams*, PrivateKey>>(k.key_file, [&] { return read_key_file(in); });
   }
   const CurveParams* c = nullptr;
   try {
      c = &curve_by_name(k.curve);
   } catch(const std::invalid_argument& e) {
      throw UsageError(e.what());
   }
   Rng rng(mix_seed(k.seed, 0x6b6579));
   return {c, generate_key(*c, rng)};
}

void add_leakage_options(CLI::App* sub, LeakageParams& p) {
   sub->add_option("--beta0", p.beta0, "Baseline spike level")->capture_default_str();
   sub->add_option("--beta1", p.beta1, "Weight of the final accumulator Hamming weight")->capture_default_str();
   sub->add_option("--beta2", p.beta2, "Weight of residual activity")->capture_default_str();
   sub->add_option("--sigma", p.sigma, "Measurement noise standard deviation")->capture_default_str();
   sub->add_option("--residual-window", p.residual_window, "Trailing windows contributing to residual activity")
      ->capture_default_str();
   sub->add_option("--decay", p.decay, "Per-window decay of the residual footprint")->capture_default_str();
}

void check_leakage(const LeakageParams& p) {
   try {
      p.validate();
   } catch(const std::invalid_argument& e) {
      throw UsageError(e.what());
   }
}

Engine parse_engine(const std::string& name) {
   try {
      return engine_from_name(name);
   } catch(const std::invalid_argument& e) {
      throw UsageError(e.what());
   }
}

// Message list CSV: message_id,message_hex[,nonce_hex[,...]] with a header.
// An empty or absent nonce column means the RFC 6979 nonce.
std::vector<PlanMessage> read_messages(const std::string& path) {
   auto in = open_input(path);
   std::vector<PlanMessage> out;
   std::string line;
   std::size_t lineno = 0;
   while(std::getline(in, line)) {
      ++lineno;
      if(!line.empty() && line.back() == '\r') line.pop_back();
      if(line.empty() || (lineno == 1 && line.rfind("message_id", 0) == 0)) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for(std::string x; std::getline(ss, x, ',');) f.push_back(x);
      try {
         if(f.size() < 2 || f[0].empty()) {
            throw std::invalid_argument("expected message_id,message_hex[,nonce_hex]");
         }
         PlanMessage m;
         m.id = f[0];
         m.message = bytes_from_hex(f[1]);
         if(f.size() > 2 && !f[2].empty()) {
            m.policy = InjectedNonce{nat_from_hex(f[2])};
         }
         out.push_back(std::move(m));
      } catch(const std::invalid_argument& e) {
         throw DataError(path + " line " + std::to_string(lineno) + ": " + e.what());
      }
   }
   if(out.empty()) {
      throw DataError(path + ": no messages");
   }
   return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
   const auto colon = s.find(':');
   try {
      if(colon == std::string::npos) {
         const std::size_t z = std::stoul(s);
         return {z, z};
      }
      const std::size_t a = std::stoul(s.substr(0, colon));
      const std::size_t b = std::stoul(s.substr(colon + 1));
      if(b < a) throw std::invalid_argument("empty range");
      return {a, b};
   } catch(const std::exception&) {
      throw UsageError("class range must look like 'A:B' or 'A', got '" + s + "'");
   }
}

// keygen ----------------------------------------------------------------------

struct KeygenCmd {
   std::string curve = "p256";
   std::uint64_t seed = 1;
   std::string out = "-";

   void setup(CLI::App& app) {
      auto* sub = app.add_subcommand("keygen", "Generate a private/public key pair");
      sub->add_option("--curve", curve, "Curve name (" + curve_list() + ")")->capture_default_str();
      sub->add_option("--seed", seed, "Seed")->capture_default_str();
      sub->add_option("-o,--out", out, "Key file ('-' for stdout)")->capture_default_str();
      sub->final_callback([this] { run(); });
   }

   static std::string curve_list() {
      std::string s;
      for(const auto& n : curve_names()) s += (s.empty() ? "" : ", ") + n;
      return s + ", cm<bits>";
   }

   void run() {
      KeyOptions k;
      k.curve = curve;
      k.seed = seed;
      const auto [c, key] = load_key(k);
      write_output(out, [&, c = c, key = key](std::ostream& os) { write_key_file(os, key, *c); });
   }
};

// search ----------------------------------------------------------------------

struct SearchCmd {
   KeyOptions key;
   std::size_t zero_bits_target = 8;
   std::size_t count = 4;
   std::string end = "leading";
   std::size_t budget = 10000000;
   std::string out = "-";

   void setup(CLI::App& app) {
      auto* sub = app.add_subcommand("search", "Find messages whose RFC 6979 nonces have zero runs");
      add_key_options(sub, key);
      sub->add_option("--zero-bits", zero_bits_target, "Minimum zero bits at the chosen end")->capture_default_str();
      sub->add_option("--count", count, "Messages to find")->capture_default_str();
      sub->add_option("--end", end, "leading or trailing")->capture_default_str();
      sub->add_option("--budget", budget, "Maximum random messages to try")->capture_default_str();
      sub->add_option("-o,--out", out, "Message CSV ('-' for stdout)")->capture_default_str();
      sub->final_callback([this] { run(); });
   }

   void run() {
      ZeroEnd ze;
      try {
         ze = zero_end_from_name(end);
      } catch(const std::invalid_argument& e) {
         throw UsageError(e.what());
      }
      if(count == 0) throw UsageError("--count must be >= 1");
      const auto [c, k] = load_key(key);
      Rng rng(mix_seed(key.seed, 0x736561));
      const SearchResult res = search_messages(zero_bits_target, count, ze, k, *c, rng, budget);
      write_output(out, [&](std::ostream& os) {
         os << "message_id,message_hex,nonce_hex,zero_bits\n";
         for(std::size_t i = 0; i < res.found.size(); ++i) {
            // The nonce column is left empty: these messages use RFC 6979.
            os << i << ',' << bytes_to_hex(res.found[i].message) << ",," << res.found[i].zero_bits << '\n';
         }
      });
      std::cerr << "search: " << res.found.size() << " of " << count << " found after " << res.draws << " draws\n";
      if(!res.feasible) {
         throw DataError("budget exhausted before finding " + std::to_string(count) + " messages (expected cost ~2^" +
                         std::to_string(zero_bits_target) + " draws per message)");
      }
   }
};

// simulate ----------------------------------------------------------------------

struct SimulateCmd {
   KeyOptions key;
   std::string preset;
   std::string engine = "w4_identity_table";
   std::size_t traces = 200;
   std::size_t iterations = 20;
   LeakageParams leakage;
   std::string messages;
   std::size_t random = 0;
   std::string classes = "0:5";
   std::size_t per_class = 4;
   std::string grouping = "nibbles";
   std::string end = "leading";
   std::string out = "-";
   CLI::App* sub = nullptr;

   void setup(CLI::App& app) {
      sub = app.add_subcommand("simulate", "Simulate sleep-spike amplitudes for repeated signing");
      add_key_options(sub, key);
      sub->add_option("--preset", preset, "Table 2 configuration (" + preset_list() + ")");
      sub->add_option("--engine", engine, "w4_identity_table, w4_qz_flag or w6_booth")->capture_default_str();
      sub->add_option("--traces", traces, "Number of traces (one spike each)")->capture_default_str();
      sub->add_option("--iterations", iterations, "Signings per trace before the spike")->capture_default_str();
      add_leakage_options(sub, leakage);
      auto* m = sub->add_option("--messages", messages, "Message CSV (message_id,message_hex[,nonce_hex])");
      auto* r = sub->add_option("--random", random, "Use this many random messages with RFC 6979 nonces");
      sub->add_option("--classes", classes, "Injected nonce classes 'A:B'")->capture_default_str();
      sub->add_option("--per-class", per_class, "Messages per class")->capture_default_str();
      sub->add_option("--grouping", grouping, "Class unit: nibbles, bits or chunks")->capture_default_str();
      sub->add_option("--zero-end", end, "leading or trailing")->capture_default_str();
      sub->add_option("-o,--out", out, "Spike CSV ('-' for stdout)")->capture_default_str();
      m->excludes(r);
      sub->final_callback([this] { run(); });
   }

   static std::string preset_list() {
      std::string s;
      for(const auto& p : presets()) s += (s.empty() ? "" : ", ") + p.name;
      return s;
   }

   void run() {
      ExperimentPlan plan;
      plan.engine = parse_engine(engine);
      plan.traces = traces;
      plan.iterations = iterations;
      if(!preset.empty()) {
         const Preset* p = nullptr;
         try {
            p = &preset_by_name(preset);
         } catch(const std::invalid_argument& e) {
            throw UsageError(e.what());
         }
         // explicit flags still win over the preset
         if(sub->count("--engine") == 0) plan.engine = p->engine;
         if(sub->count("--traces") == 0) plan.traces = p->traces;
         if(sub->count("--iterations") == 0) plan.iterations = p->iterations;
      }
      if(plan.traces == 0) throw UsageError("--traces must be >= 1");
      if(plan.iterations == 0) throw UsageError("--iterations must be >= 1");
      check_leakage(leakage);
      try {
         plan.zero_end = zero_end_from_name(end);
      } catch(const std::invalid_argument& e) {
         throw UsageError(e.what());
      }
      Grouping g;
      try {
         g = grouping_from_name(grouping);
      } catch(const std::invalid_argument& e) {
         throw UsageError(e.what());
      }
      const auto [c, k] = load_key(key);
      Rng rng(mix_seed(key.seed, 0x6d7367));
      if(!messages.empty()) {
         plan.messages = read_messages(messages);
      } else if(random > 0) {
         plan.messages = random_messages(random, rng);
      } else {
         const auto [lo, hi] = parse_range(classes);
         if(per_class == 0) throw UsageError("--per-class must be >= 1");
         try {
            plan.messages = class_messages(lo, hi, per_class, g, plan.zero_end, *c, rng);
         } catch(const std::invalid_argument& e) {
            throw UsageError(e.what());
         }
      }
      plan.seed = mix_seed(key.seed, 0x73696d);
      const auto records =
         as_data<std::vector<SpikeRecord>>("simulate", [&, c = c, k = k] { return run_plan(plan, k, *c, leakage); });
      write_output(out, [&](std::ostream& os) { write_spike_csv(os, records); });
   }
};

// figure ----------------------------------------------------------------------

struct FigureCmd {
   std::string in;
   std::string grouping = "nibbles";
   std::size_t per_class = 4;
   std::string out = "-";

   void setup(CLI::App& app) {
      auto* sub = app.add_subcommand("figure", "Turn labeled spike records into a plottable series");
      sub->add_option("-i,--in", in, "Spike CSV from simulate")->required();
      sub->add_option("--grouping", grouping, "nibbles, bits or chunks")->capture_default_str();
      sub->add_option("--messages-per-class", per_class, "Messages averaged per point (0 = all)")
         ->capture_default_str();
      sub->add_option("-o,--out", out, "Figure CSV ('-' for stdout)")->capture_default_str();
      sub->final_callback([this] { run(); });
   }

   void run() {
      Grouping g;
      try {
         g = grouping_from_name(grouping);
      } catch(const std::invalid_argument& e) {
         throw UsageError(e.what());
      }
      auto is = open_input(in);
      const auto records = as_data<std::vector<SpikeRecord>>(in, [&] { return read_spike_csv(is); });
      std::vector<std::string> warnings;
      const auto points = as_data<std::vector<FigurePoint>>(in, [&] { return figure_series(records, g, per_class, &warnings); });
      for(const auto& w : warnings) std::cerr << "figure: " << w << '\n';
      write_output(out, [&](std::ostream& os) { write_figure_csv(os, points); });
   }
};

// analyze ----------------------------------------------------------------------

struct AnalyzeCmd {
   std::vector<std::string> paths;
   std::size_t window = 10;
   std::string out = "-";
   std::string spikes_out;

   void setup(CLI::App& app) {
      auto* sub = app.add_subcommand("analyze", "Extract spikes from raw scope traces and summarize per message");
      sub->add_option("paths", paths, "Trace files or directories")->required();
      sub->add_option("--window", window, "Moving-average window in samples")->capture_default_str();
      sub->add_option("-o,--out", out, "Summary CSV ('-' for stdout)")->capture_default_str();
      sub->add_option("--spikes-out", spikes_out, "Also write per-file spike records");
      sub->final_callback([this] { run(); });
   }

   void run() {
      if(window == 0) throw UsageError("--window must be >= 1");
      std::vector<fs::path> files;
      for(const auto& p : paths) {
         std::error_code ec;
         if(fs::is_directory(p, ec)) {
            for(const auto& e : fs::directory_iterator(p)) {
               if(e.is_regular_file()) files.push_back(e.path());
            }
         } else {
            files.emplace_back(p);
         }
      }
      std::sort(files.begin(), files.end());
      std::vector<SpikeRecord> records;
      std::size_t failed = 0;
      for(const auto& f : files) {
         try {
            SpikeRecord r = ingest_raw(f, window);
            r.trace_id = records.size();
            records.push_back(std::move(r));
         } catch(const std::exception& e) {
            ++failed;
            std::cerr << "analyze: " << f.string() << ": " << e.what() << '\n';
         }
      }
      const auto summaries = summarize(records);
      write_output(out, [&](std::ostream& os) { write_summary_csv(os, summaries); });
      if(!spikes_out.empty()) {
         write_output(spikes_out, [&](std::ostream& os) { write_spike_csv(os, records); });
      }
      std::cerr << "analyze: " << records.size() << " traces ingested, " << failed << " failed\n";
      if(failed > 0) {
         throw DataError(std::to_string(failed) + " file(s) could not be ingested");
      }
   }
};

// attack ----------------------------------------------------------------------

struct AttackCmd {
   KeyOptions key;
   std::string mode = "oracle";
   std::string instance;
   std::string pub_hex;
   int ell = 20;
   std::size_t signatures = 45;
   std::size_t d_subset = 0;
   std::size_t max_tries = 0;
   std::size_t candidates = 50000;
   std::size_t traces_per_message = 1;
   std::size_t iterations = 750;
   std::string engine = "w4_identity_table";
   double margin = 1.5;
   LeakageParams leakage;
   std::string report;
   CLI::App* sub = nullptr;

   void setup(CLI::App& app) {
      sub = app.add_subcommand("attack", "Recover the private key through the lattice attack");
      add_key_options(sub, key);
      sub->add_option("--mode", mode, "oracle, classifier or instance")->capture_default_str();
      sub->add_option("--instance", instance, "Instance file (t,u,ell per line); implies --mode instance");
      sub->add_option("--pub", pub_hex, "Public key 04||x||y for instance mode (default: from the key)");
      sub->add_option("--ell", ell, "Claimed zero leading bits per nonce")->capture_default_str();
      sub->add_option("--signatures", signatures, "Signatures in oracle mode")->capture_default_str();
      sub->add_option("--d-subset", d_subset, "Lattice subset size (0 = mode default)")->capture_default_str();
      sub->add_option("--max-tries", max_tries, "Resampling budget (0 = mode default)")->capture_default_str();
      sub->add_option("--candidates", candidates, "Candidate messages in classifier mode")->capture_default_str();
      sub->add_option("--traces-per-message", traces_per_message, "Traces per candidate")->capture_default_str();
      sub->add_option("--iterations", iterations, "Signings per trace")->capture_default_str();
      sub->add_option("--engine", engine, "Engine for classifier mode")->capture_default_str();
      sub->add_option("--margin", margin, "Over-selection factor for rank selection")->capture_default_str();
      add_leakage_options(sub, leakage);
      sub->add_option("--report", report, "Write a key=value report file");
      sub->final_callback([this] { run(); });
   }

   void emit(const DrillReport& rep, const CurveParams& c, const std::string& which) {
      std::ostringstream os;
      os << "mode=" << which << '\n'
         << "curve=" << c.name << '\n'
         << "success=" << (rep.success ? "true" : "false") << '\n'
         << "key=" << (rep.success ? nat_to_hex(rep.key, c.order_bytes() * 2) : "") << '\n'
         << "verified=" << (rep.success ? "true" : "false") << '\n'
         << "signatures=" << rep.signatures << '\n';
      if(which == "classifier") {
         os << "true_samples=" << rep.true_samples << '\n';
      }
      os << "d_subset=" << rep.d_subset << '\n'
         << "tries=" << rep.tries << '\n'
         << "attack_seconds=" << rep.attack_seconds << '\n'
         << "total_seconds=" << rep.total_seconds << '\n';
      std::cout << os.str();
      if(!report.empty()) {
         write_output(report, [&](std::ostream& out) { out << os.str(); });
      }
   }

   void run() {
      if(!instance.empty()) mode = "instance";
      if(mode != "oracle" && mode != "classifier" && mode != "instance") {
         throw UsageError("--mode must be oracle, classifier or instance");
      }
      check_leakage(leakage);
      if(mode == "instance") {
         run_instance();
         return;
      }
      const auto [c, k] = load_key(key);
      DrillReport rep;
      try {
         if(mode == "oracle") {
            OracleDrill cfg;
            cfg.ell = ell;
            cfg.signatures = signatures;
            cfg.d_subset = d_subset;
            cfg.max_tries = max_tries == 0 ? 1 : max_tries;
            cfg.seed = key.seed;
            rep = run_oracle_drill(cfg, k, *c);
         } else {
            ClassifierDrill cfg;
            cfg.ell = sub->count("--ell") ? ell : 12;
            cfg.candidates = candidates;
            cfg.traces_per_message = traces_per_message;
            cfg.iterations = iterations;
            cfg.engine = parse_engine(engine);
            cfg.leakage = leakage;
            cfg.margin = margin;
            cfg.d_subset = d_subset;
            cfg.max_tries = max_tries == 0 ? cfg.max_tries : max_tries;
            cfg.seed = key.seed;
            if(cfg.candidates == 0 || cfg.traces_per_message == 0 || cfg.iterations == 0) {
               throw UsageError("--candidates, --traces-per-message and --iterations must be >= 1");
            }
            rep = run_classifier_drill(cfg, k, *c);
         }
      } catch(const std::invalid_argument& e) {
         throw UsageError(e.what());
      }
      emit(rep, *c, mode);
      if(!rep.success) {
         throw NotFound("no key recovered");
      }
   }

   void run_instance() {
      const CurveParams* c = nullptr;
      PublicKey pub;
      if(!pub_hex.empty()) {
         try {
            c = &curve_by_name(key.curve);
         } catch(const std::invalid_argument& e) {
            throw UsageError(e.what());
         }
         pub.q = as_data<AffinePoint>("--pub", [&] { return decode_point(pub_hex, *c); });
      } else if(!key.key_file.empty()) {
         const auto [kc, k] = load_key(key);
         c = kc;
         pub = public_key(k, *c);
      } else {
         throw UsageError("instance mode needs --pub (with --curve) or --key");
      }
      auto in = open_input(instance);
      const HnpInstance inst = as_data<HnpInstance>(instance, [&] { return read_instance(in, *c); });
      if(inst.samples.size() < 2) throw DataError(instance + ": need at least two samples");
      DrillReport rep;
      rep.signatures = inst.samples.size();
      rep.d_subset = d_subset == 0 ? inst.samples.size() : d_subset;
      if(rep.d_subset < 2 || rep.d_subset > inst.samples.size()) {
         throw UsageError("--d-subset must lie in [2, number of samples]");
      }
      Rng rng(mix_seed(key.seed, 0x61746b));
      const RecoveryResult rr =
         attack_with_resampling(inst, pub, *c, rep.d_subset, max_tries == 0 ? 1 : max_tries, rng);
      rep.success = rr.success;
      rep.key = rr.key;
      rep.tries = rr.tries;
      rep.attack_seconds = rep.total_seconds = rr.seconds;
      emit(rep, *c, "instance");
      if(!rep.success) {
         throw NotFound("no key recovered");
      }
   }
};

// Rewrites "--config FILE" into the flags it lists. Keys already given on
// the command line are skipped, so explicit flags win. Lines are
// "key = value"; blank lines, '#' comments and [section] headers are ignored.
std::vector<std::string> expand_config(int argc, char** argv) {
   std::vector<std::string> args(argv + 1, argv + argc);
   std::string path;
   for(std::size_t i = 0; i < args.size(); ++i) {
      if(args[i] == "--config" && i + 1 < args.size()) {
         path = args[i + 1];
         args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
         break;
      }
      if(args[i].rfind("--config=", 0) == 0) {
         path = args[i].substr(9);
         args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
         break;
      }
   }
   if(path.empty()) {
      std::reverse(args.begin(), args.end());
      return args;
   }
   auto in = open_input(path);
   auto given = [&](const std::string& flag) {
      return std::any_of(args.begin(), args.end(),
                         [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
   };
   auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
   };
   std::vector<std::string> extra;
   std::string line;
   std::size_t lineno = 0;
   while(std::getline(in, line)) {
      ++lineno;
      line = trim(line);
      if(line.empty() || line[0] == '#' || line[0] == '[') continue;
      const auto eq = line.find('=');
      if(eq == std::string::npos) {
         throw UsageError(path + " line " + std::to_string(lineno) + ": expected key=value");
      }
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if(value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      std::replace(key.begin(), key.end(), '_', '-');
      const std::string flag = "--" + key;
      if(!given(flag)) {
         extra.push_back(flag);
         extra.push_back(value);
      }
   }
   args.insert(args.end(), extra.begin(), extra.end());
   // CLI11 consumes a vector argument list back to front.
   std::reverse(args.begin(), args.end());
   return args;
}

}  // namespace

int main(int argc, char** argv) {
   CLI::App app{"Sleep-spike nonce leakage simulator and lattice key recovery"};
   app.require_subcommand(1);
   KeygenCmd keygen;
   SearchCmd search;
   SimulateCmd simulate;
   FigureCmd figure;
   AnalyzeCmd analyze;
   AttackCmd attack;
   keygen.setup(app);
   search.setup(app);
   simulate.setup(app);
   figure.setup(app);
   analyze.setup(app);
   attack.setup(app);
   for(auto* sub : app.get_subcommands({})) {
      sub->add_option("--config", "Flat key=value file; command-line flags take precedence");
   }
   try {
      app.parse(expand_config(argc, argv));
   } catch(const CLI::CallForHelp& e) {
      return app.exit(e);
   } catch(const CLI::CallForAllHelp& e) {
      return app.exit(e);
   } catch(const CLI::CallForVersion& e) {
      return app.exit(e);
   } catch(const CLI::ParseError& e) {
      app.exit(e);
      return kUsage;
   } catch(const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
   } catch(const DataError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kData;
   } catch(const NotFound& e) {
      std::cerr << "attack: " << e.what() << '\n';
      return kNotFound;
   } catch(const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kData;
   }
   return 0;
}

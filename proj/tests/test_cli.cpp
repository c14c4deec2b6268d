#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "sleepspike/hnp.hpp"
#include "sleepspike/leakage.hpp"

using namespace sleepspike;
namespace fs = std::filesystem;

#ifdef SLEEPSPIKE_CLI

namespace {

struct TempDir {
   fs::path path;
   TempDir() {
      path = fs::temp_directory_path() / ("sleepspike_cli_" + std::to_string(::getpid()));
      fs::remove_all(path);
      fs::create_directories(path);
   }
   ~TempDir() { fs::remove_all(path); }
   std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
   const std::string cmd = std::string(SLEEPSPIKE_CLI) + " " + args + " >/dev/null 2>&1";
   const int st = std::system(cmd.c_str());
   return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

int run_to(const std::string& args, const std::string& out) {
   const std::string cmd = std::string(SLEEPSPIKE_CLI) + " " + args + " >" + out + " 2>/dev/null";
   const int st = std::system(cmd.c_str());
   return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
   std::ifstream in(path, std::ios::binary);
   std::stringstream ss;
   ss << in.rdbuf();
   return ss.str();
}

std::vector<std::string> lines(const std::string& path) {
   std::vector<std::string> out;
   std::ifstream in(path);
   std::string l;
   while(std::getline(in, l)) out.push_back(l);
   return out;
}

std::vector<double> figure_means(const std::string& path) {
   std::vector<double> m;
   const auto ls = lines(path);
   for(std::size_t i = 1; i < ls.size(); ++i) {
      const auto a = ls[i].find(',');
      m.push_back(std::stod(ls[i].substr(a + 1, ls[i].find(',', a + 1) - a - 1)));
   }
   return m;
}

void write_trace(const std::string& path, double peak) {
   std::ofstream os(path);
   os << "t,v\n";
   for(int i = 0; i < 50; ++i) {
      os << i * 1e-6 << ',' << (i >= 20 && i < 30 ? peak : 0.1) << '\n';
   }
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
   CHECK(run("") == 1);
   CHECK(run("--help") == 0);
   CHECK(run("frobnicate") == 1);
   CHECK(run("simulate --preset pi4-bearssl --bogus 1") == 1);
   CHECK(run("simulate --preset nope") == 1);
   CHECK(run("simulate --preset pi4-bearssl --traces 0") == 1);
   CHECK(run("keygen --curve nope") == 1);
}

TEST_CASE("keygen is deterministic per seed") {
   TempDir d;
   CHECK(run("keygen --curve p256 --seed 5 -o " + d / "a.key") == 0);
   CHECK(run("keygen --curve p256 --seed 5 -o " + d / "b.key") == 0);
   CHECK(run("keygen --curve p256 --seed 6 -o " + d / "c.key") == 0);
   CHECK(slurp(d / "a.key") == slurp(d / "b.key"));
   CHECK(slurp(d / "a.key") != slurp(d / "c.key"));
   CHECK(lines(d / "a.key").at(0) == "p256");
}

TEST_CASE("simulate presets and reproducibility") {
   TempDir d;
   REQUIRE(run("simulate --preset pi4-rustcrypto --seed 3 -o " + d / "a.csv") == 0);
   REQUIRE(run("simulate --preset pi4-rustcrypto --seed 3 -o " + d / "b.csv") == 0);
   const auto ls = lines(d / "a.csv");
   CHECK(ls.size() == 1001);
   CHECK(ls[0] == "trace_id,message_id,engine,iterations,spike,truth_zero_bits");
   CHECK(ls[1].find("w4_identity_table,20,") != std::string::npos);
   CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
   REQUIRE(run("simulate --preset pi4-rustcrypto --seed 4 -o " + d / "c.csv") == 0);
   CHECK(slurp(d / "a.csv") != slurp(d / "c.csv"));
   REQUIRE(run("simulate --preset vf2-bearssl --traces 30 -o " + d / "e.csv") == 0);
   const auto es = lines(d / "e.csv");
   CHECK(es.size() == 31);
   CHECK(es[1].find("w4_qz_flag,250,") != std::string::npos);
}

TEST_CASE("config files feed flags and lose to explicit flags") {
   TempDir d;
   {
      std::ofstream cfg(d / "run.ini");
      cfg << "# plan\n[simulate]\nengine = w4_qz_flag\ntraces = 4\niterations = 5\nsigma = 0\nclasses = 1:1\nper_class = 1\n";
   }
   REQUIRE(run("simulate --config " + d / "run.ini" + " -o " + d / "a.csv") == 0);
   auto ls = lines(d / "a.csv");
   REQUIRE(ls.size() == 5);
   const auto spike = [](const std::string& l) { return l.substr(l.find(",5,") + 3); };
   for(std::size_t i = 2; i < ls.size(); ++i) {
      CHECK(spike(ls[i]) == spike(ls[1]));
   }
   REQUIRE(run("simulate --config " + d / "run.ini" + " --traces 7 -o " + d / "b.csv") == 0);
   CHECK(lines(d / "b.csv").size() == 8);
   CHECK(run("simulate --config " + d / "missing.ini") == 2);
}

TEST_CASE("figure series") {
   TempDir d;
   REQUIRE(run("simulate --engine w4_qz_flag --iterations 750 --traces 120 --per-class 20 --classes 0:5 --sigma 0 "
               "-o " +
               d / "s.csv") == 0);
   REQUIRE(run("figure -i " + d / "s.csv" + " --messages-per-class 0 -o " + d / "f.csv") == 0);
   const auto ls = lines(d / "f.csv");
   REQUIRE(ls.size() == 7);
   CHECK(ls[0] == "z,mean_spike,std,count");
   const auto m = figure_means(d / "f.csv");
   for(std::size_t i = 1; i < m.size(); ++i) {
      CHECK(m[i] < m[i - 1]);
   }

   REQUIRE(run("simulate --engine w4_qz_flag --traces 8 --classes 2:2 -o " + d / "one.csv") == 0);
   REQUIRE(run("figure -i " + d / "one.csv" + " -o " + d / "one_f.csv") == 0);
   CHECK(lines(d / "one_f.csv").size() == 2);

   REQUIRE(run("simulate --random 5 --traces 5 -o " + d / "r.csv") == 0);
   {
      // drop the truth labels
      std::ofstream os(d / "nolabel.csv");
      for(const auto& l : lines(d / "r.csv")) os << l.substr(0, l.rfind(',')) + ",\n";
   }
   CHECK(run("figure -i " + d / "nolabel.csv") == 2);
   CHECK(run("figure -i " + d / "absent.csv") == 2);
}

TEST_CASE("search writes a message list that simulate accepts") {
   TempDir d;
   REQUIRE(run("search --curve secp128r1 --zero-bits 4 --count 3 -o " + d / "m.csv") == 0);
   CHECK(lines(d / "m.csv").size() == 4);
   REQUIRE(run("simulate --curve secp128r1 --messages " + d / "m.csv" + " --traces 6 -o " + d / "s.csv") == 0);
   const auto ls = lines(d / "s.csv");
   REQUIRE(ls.size() == 7);
   for(std::size_t i = 1; i < ls.size(); ++i) {
      CHECK(std::stoul(ls[i].substr(ls[i].rfind(',') + 1)) >= 4);
   }
   CHECK(run("search --curve secp128r1 --zero-bits 60 --count 1 --budget 10") == 2);
}

TEST_CASE("analyze raw traces") {
   TempDir d;
   fs::create_directories(d / "traces");
   fs::create_directories(d / "empty");
   for(int i = 0; i < 10; ++i) {
      write_trace(d / ("traces/m" + std::to_string(i) + ".csv"), 1.0 + 0.1 * i);
   }
   REQUIRE(run("analyze " + d / "traces" + " -o " + d / "sum.csv --spikes-out " + d / "sp.csv") == 0);
   const auto ls = lines(d / "sum.csv");
   REQUIRE(ls.size() == 11);
   CHECK(ls[0] == "message_id,mean_spike,std_spike,n_traces");
   CHECK(lines(d / "sp.csv").size() == 11);

   REQUIRE(run("analyze " + d / "empty" + " -o " + d / "none.csv") == 0);
   CHECK(lines(d / "none.csv").size() == 1);

   {
      std::ofstream bad(d / "traces/broken.csv");
      bad << "t,v\n0,1\n1,oops\n";
   }
   CHECK(run_to("analyze " + d / "traces", d / "partial.csv") == 2);
   CHECK(lines(d / "partial.csv").size() == 11);
}

TEST_CASE("attack modes and exit codes") {
   TempDir d;
   CHECK(run_to("attack --mode oracle --curve secp128r1 --ell 16 --signatures 12 --seed 2", d / "r.txt") == 0);
   const std::string report = slurp(d / "r.txt");
   CHECK(report.find("success=true") != std::string::npos);
   CHECK(report.find("verified=true") != std::string::npos);

   // instance mode against a planted instance
   const CurveParams& c = curve_secp128r1();
   Rng rng(71);
   const PrivateKey key = generate_key(c, rng);
   std::vector<SignedHash> sigs;
   for(int i = 0; i < 12; ++i) {
      const Nat k = random_below(rng, Nat(1) << 112) + 1;
      const SignResult r = ecdsa_sign_detailed(random_bytes(rng, 32), key, InjectedNonce{k}, c);
      sigs.push_back({r.sig, r.h});
   }
   {
      std::ofstream os(d / "inst.csv");
      write_instance(os, build_instance(sigs, std::vector<int>(12, 16), c));
      std::ofstream kf(d / "k.key");
      write_key_file(kf, key, c);
      // full-size nonces claimed to have 16 zero bits
      std::vector<SignedHash> plain;
      for(int i = 0; i < 12; ++i) {
         const SignResult r = ecdsa_sign_detailed(random_bytes(rng, 32), key, Rfc6979Nonce{}, c);
         plain.push_back({r.sig, r.h});
      }
      std::ofstream over(d / "over.csv");
      write_instance(over, build_instance(plain, std::vector<int>(12, 16), c));
   }
   const std::string pub = encode_point(public_key(key, c).q, c);
   CHECK(run_to("attack --instance " + d / "inst.csv" + " --curve secp128r1 --pub " + pub, d / "i.txt") == 0);
   CHECK(slurp(d / "i.txt").find("key=" + nat_to_hex(key.d, 32)) != std::string::npos);
   CHECK(run("attack --instance " + d / "inst.csv" + " --key " + d / "k.key") == 0);
   CHECK(run("attack --instance " + d / "over.csv" + " --key " + d / "k.key") == 3);
   CHECK(run("attack --instance " + d / "inst.csv") == 1);
   CHECK(run("attack --mode nope") == 1);
}

}

#endif

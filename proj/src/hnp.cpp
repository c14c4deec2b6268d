#include "sleepspike/hnp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sleepspike {

HnpInstance build_instance(const std::vector<SignedHash>& sigs, const std::vector<int>& ells, const CurveParams& c) {
   if(sigs.size() != ells.size()) {
      throw std::invalid_argument("build_instance: one ell per signature is required");
   }
   HnpInstance inst;
   inst.n = c.n;
   inst.lambda = c.order_bits();
   for(std::size_t i = 0; i < sigs.size(); ++i) {
      const auto sinv = mod_inv(sigs[i].sig.s, c.n);
      if(!sinv) {
         inst.skipped.push_back(i);
         continue;
      }
      if(ells[i] < 0 || static_cast<std::size_t>(ells[i]) > inst.lambda) {
         throw std::invalid_argument("build_instance: ell out of range");
      }
      inst.samples.push_back(HnpSample{mod_mul(sigs[i].sig.r, *sinv, c.n), mod_mul(sigs[i].h, *sinv, c.n), ells[i]});
   }
   return inst;
}

LatticeBasis build_lattice(const HnpInstance& inst) {
   const std::size_t d = inst.samples.size();
   if(d < 2) {
      throw std::invalid_argument("build_lattice: at least two samples are required");
   }
   const std::size_t dim = d + 2;
   const Nat center = Nat(1) << inst.lambda;
   LatticeBasis b;
   b.rows.assign(dim, std::vector<Nat>(dim, 0));
   for(std::size_t i = 0; i < d; ++i) {
      const Nat scale = Nat(1) << (inst.samples[i].ell + 1);
      b.rows[i][i] = scale * inst.n;
      b.rows[d][i] = scale * inst.samples[i].t;
      b.rows[d + 1][i] = scale * inst.samples[i].u - center;
   }
   b.rows[d][d] = 1;
   b.rows[d + 1][d + 1] = center;
   return b;
}

namespace {

Nat dot(const std::vector<Nat>& a, const std::vector<Nat>& b) {
   Nat s = 0;
   for(std::size_t i = 0; i < a.size(); ++i) {
      mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
   }
   return s;
}

void divexact(Nat& v, const Nat& by) {
   mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), by.get_mpz_t());
}

std::pair<Nat, Nat> delta_fraction(double delta) {
   if(!(delta > 0.25 && delta < 1.0)) {
      throw std::invalid_argument("LLL delta must lie in (0.25, 1)");
   }
   const long den = 1000000000L;
   return {Nat(std::lround(delta * static_cast<double>(den))), Nat(den)};
}

// Integral Gram-Schmidt data, 1-based as in the classical presentation:
// d[i] is the Gram determinant of the first i rows and lam[i][j] = d[j] * mu_ij.
struct IntegralGso {
   std::vector<Nat> d;
   std::vector<std::vector<Nat>> lam;

   explicit IntegralGso(std::size_t n) : d(n + 1, 0), lam(n + 1, std::vector<Nat>(n + 1, 0)) { d[0] = 1; }

   // Fills row k from the basis; rows 1..k-1 must already be present.
   void compute_row(const std::vector<std::vector<Nat>>& rows, std::size_t k) {
      for(std::size_t j = 1; j <= k; ++j) {
         Nat u = dot(rows[k - 1], rows[j - 1]);
         for(std::size_t i = 1; i < j; ++i) {
            u = d[i] * u - lam[k][i] * lam[j][i];
            divexact(u, d[i - 1]);
         }
         if(j < k) {
            lam[k][j] = u;
         } else {
            if(u == 0) {
               throw std::invalid_argument("lll_reduce: basis rows are linearly dependent");
            }
            d[k] = u;
         }
      }
   }
};

}  // namespace

LatticeBasis lll_reduce(const LatticeBasis& basis, const LllParams& params, LllStats* stats) {
   const auto [num, den] = delta_fraction(params.delta);
   LatticeBasis out = basis;
   auto& b = out.rows;
   const std::size_t n = b.size();
   if(n == 0) {
      return out;
   }
   for(const auto& row : b) {
      if(row.size() != b[0].size()) {
         throw std::invalid_argument("lll_reduce: ragged basis");
      }
   }
   LllStats local;
   IntegralGso g(n);
   g.compute_row(b, 1);
   std::size_t kmax = 1;

   auto reduce = [&](std::size_t k, std::size_t l) {
      Nat twice = 2 * g.lam[k][l];
      if(abs(twice) <= g.d[l]) {
         return;
      }
      // q = round(lam / d)
      Nat q = twice + g.d[l];
      Nat den2 = 2 * g.d[l];
      mpz_fdiv_q(q.get_mpz_t(), q.get_mpz_t(), den2.get_mpz_t());
      auto& bk = b[k - 1];
      const auto& bl = b[l - 1];
      for(std::size_t i = 0; i < bk.size(); ++i) {
         mpz_submul(bk[i].get_mpz_t(), q.get_mpz_t(), bl[i].get_mpz_t());
      }
      mpz_submul(g.lam[k][l].get_mpz_t(), q.get_mpz_t(), g.d[l].get_mpz_t());
      for(std::size_t i = 1; i < l; ++i) {
         mpz_submul(g.lam[k][i].get_mpz_t(), q.get_mpz_t(), g.lam[l][i].get_mpz_t());
      }
      ++local.reductions;
   };

   auto swap = [&](std::size_t k) {
      std::swap(b[k - 1], b[k - 2]);
      for(std::size_t j = 1; j + 2 <= k; ++j) {
         std::swap(g.lam[k][j], g.lam[k - 1][j]);
      }
      const Nat lam = g.lam[k][k - 1];
      Nat bnew = g.d[k - 2] * g.d[k] + lam * lam;
      divexact(bnew, g.d[k - 1]);
      for(std::size_t i = k + 1; i <= kmax; ++i) {
         const Nat t = g.lam[i][k];
         Nat v = g.d[k] * g.lam[i][k - 1] - lam * t;
         divexact(v, g.d[k - 1]);
         g.lam[i][k] = v;
         Nat w = bnew * t + lam * g.lam[i][k];
         divexact(w, g.d[k]);
         g.lam[i][k - 1] = w;
      }
      g.d[k - 1] = bnew;
      ++local.swaps;
   };

   std::size_t k = 2;
   while(k <= n) {
      if(k > kmax) {
         kmax = k;
         g.compute_row(b, k);
      }
      reduce(k, k - 1);
      const Nat& lam = g.lam[k][k - 1];
      const Nat lhs = den * g.d[k] * g.d[k - 2];
      const Nat rhs = num * g.d[k - 1] * g.d[k - 1] - den * lam * lam;
      if(lhs < rhs) {
         swap(k);
         k = std::max<std::size_t>(2, k - 1);
      } else {
         for(std::size_t l = k - 1; l-- > 1;) {
            reduce(k, l);
         }
         ++k;
      }
   }
   if(stats != nullptr) {
      *stats = local;
   }
   return out;
}

LllCheck check_lll(const LatticeBasis& basis, double delta) {
   const auto [num, den] = delta_fraction(delta);
   const std::size_t n = basis.size();
   LllCheck out;
   out.size_reduced = true;
   out.lovasz = true;
   if(n == 0) {
      return out;
   }
   IntegralGso g(n);
   for(std::size_t k = 1; k <= n; ++k) {
      g.compute_row(basis.rows, k);
   }
   for(std::size_t k = 2; k <= n; ++k) {
      for(std::size_t j = 1; j < k; ++j) {
         if(2 * abs(g.lam[k][j]) > g.d[j]) {
            out.size_reduced = false;
         }
         const mpq_class mu(g.lam[k][j], g.d[j]);
         out.max_mu = std::max(out.max_mu, std::abs(mu.get_d()));
      }
      const Nat& lam = g.lam[k][k - 1];
      if(den * g.d[k] * g.d[k - 2] < num * g.d[k - 1] * g.d[k - 1] - den * lam * lam) {
         out.lovasz = false;
      }
   }
   return out;
}

std::optional<Nat> recover_key(const LatticeBasis& reduced, const HnpInstance& inst, const PublicKey& pub,
                               const CurveParams& c) {
   const std::size_t col = inst.samples.size();
   for(const auto& row : reduced.rows) {
      if(row.size() <= col) {
         continue;
      }
      const Nat base = mod(abs(row[col]), inst.n);
      if(base == 0) {
         continue;
      }
      for(const Nat& cand : {base, Nat(inst.n - base)}) {
         if(scalar_mul_naive(cand, c.g, c) == pub.q) {
            return cand;
         }
      }
   }
   return std::nullopt;
}

std::size_t default_subset_size(std::size_t lambda, int ell) {
   if(ell <= 0) {
      throw std::invalid_argument("default_subset_size: ell must be positive");
   }
   const std::size_t e = static_cast<std::size_t>(ell);
   return (lambda + e - 1) / e + 7;
}

RecoveryResult attack_with_resampling(const HnpInstance& inst, const PublicKey& pub, const CurveParams& c,
                                      std::size_t d_subset, std::size_t max_tries, Rng& rng,
                                      const LllParams& params) {
   const auto start = std::chrono::steady_clock::now();
   RecoveryResult res;
   const std::size_t total = inst.samples.size();
   if(d_subset < 2 || d_subset > total) {
      throw std::invalid_argument("attack_with_resampling: need 2 <= d_subset <= number of samples");
   }
   std::vector<std::size_t> idx(total);
   std::iota(idx.begin(), idx.end(), 0);
   while(res.tries < max_tries) {
      ++res.tries;
      // Partial Fisher-Yates: the first d_subset positions form the subset.
      for(std::size_t i = 0; i < d_subset && d_subset < total; ++i) {
         std::uniform_int_distribution<std::size_t> pick(i, total - 1);
         std::swap(idx[i], idx[pick(rng)]);
      }
      HnpInstance sub;
      sub.n = inst.n;
      sub.lambda = inst.lambda;
      for(std::size_t i = 0; i < d_subset; ++i) {
         sub.samples.push_back(inst.samples[idx[i]]);
      }
      const LatticeBasis reduced = lll_reduce(build_lattice(sub), params);
      if(auto key = recover_key(reduced, sub, pub, c)) {
         res.success = true;
         res.key = *key;
         break;
      }
   }
   res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
   return res;
}

void write_instance(std::ostream& os, const HnpInstance& inst) {
   const std::size_t w = (bit_length(inst.n) + 7) / 8 * 2;
   os << "# t,u,ell\n";
   for(const auto& s : inst.samples) {
      os << "0x" << nat_to_hex(s.t, w) << ",0x" << nat_to_hex(s.u, w) << ',' << s.ell << '\n';
   }
}

namespace {

Nat parse_number(const std::string& field) {
   std::string f = field;
   f.erase(std::remove_if(f.begin(), f.end(), [](unsigned char ch) { return std::isspace(ch); }), f.end());
   if(f.size() > 2 && f[0] == '0' && (f[1] == 'x' || f[1] == 'X')) {
      return nat_from_hex(f);
   }
   if(f.empty() || !std::all_of(f.begin(), f.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
      throw std::invalid_argument("not a number: '" + field + "'");
   }
   return Nat(f, 10);
}

}  // namespace

HnpInstance read_instance(std::istream& is, const CurveParams& c) {
   HnpInstance inst;
   inst.n = c.n;
   inst.lambda = c.order_bits();
   std::string line;
   std::size_t lineno = 0;
   while(std::getline(is, line)) {
      ++lineno;
      if(line.empty() || line[0] == '#') {
         continue;
      }
      std::stringstream ss(line);
      std::string t, u, ell;
      if(!std::getline(ss, t, ',') || !std::getline(ss, u, ',') || !std::getline(ss, ell)) {
         throw std::invalid_argument("instance line " + std::to_string(lineno) + ": expected t,u,ell");
      }
      try {
         HnpSample s{mod(parse_number(t), c.n), mod(parse_number(u), c.n), static_cast<int>(parse_number(ell).get_si())};
         if(s.ell < 0 || static_cast<std::size_t>(s.ell) > inst.lambda) {
            throw std::invalid_argument("ell out of range");
         }
         inst.samples.push_back(std::move(s));
      } catch(const std::invalid_argument& e) {
         throw std::invalid_argument("instance line " + std::to_string(lineno) + ": " + e.what());
      }
   }
   return inst;
}

}  // namespace sleepspike

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sleepspike/drill.hpp"

namespace py = pybind11;
using namespace sleepspike;

namespace {

Nat to_nat(const py::int_& v) {
   Nat out;
   out.set_str(py::str(static_cast<py::handle>(v)).cast<std::string>(), 10);
   return out;
}

py::int_ to_py(const Nat& v) {
   return py::reinterpret_steal<py::int_>(PyLong_FromString(v.get_str(16).c_str(), nullptr, 16));
}

Bytes to_bytes(const py::bytes& b) {
   const std::string s = b;
   return Bytes(s.begin(), s.end());
}

py::object point(const AffinePoint& p) {
   if(p.infinity) return py::none();
   return py::make_tuple(to_py(p.x), to_py(p.y));
}

const CurveParams& curve(const std::string& name) { return curve_by_name(name); }

LeakageParams leakage(double beta0, double beta1, double beta2, double sigma, std::size_t window, double decay) {
   LeakageParams p;
   p.beta0 = beta0;
   p.beta1 = beta1;
   p.beta2 = beta2;
   p.sigma = sigma;
   p.residual_window = window;
   p.decay = decay;
   p.validate();
   return p;
}

py::dict record_dict(const SpikeRecord& r) {
   py::dict d;
   d["trace_id"] = r.trace_id;
   d["message_id"] = r.message_id;
   d["engine"] = std::string(engine_name(r.engine));
   d["iterations"] = r.iterations;
   d["spike"] = r.spike;
   d["truth_zero_bits"] = r.truth_zero_bits ? py::object(py::int_(*r.truth_zero_bits)) : py::object(py::none());
   return d;
}

SpikeRecord record_from(const py::dict& d) {
   SpikeRecord r;
   r.message_id = py::str(d["message_id"]).cast<std::string>();
   r.spike = d["spike"].cast<double>();
   if(d.contains("trace_id")) r.trace_id = d["trace_id"].cast<std::size_t>();
   if(d.contains("engine")) r.engine = engine_from_name(d["engine"].cast<std::string>());
   if(d.contains("iterations")) r.iterations = d["iterations"].cast<std::size_t>();
   if(d.contains("truth_zero_bits") && !d["truth_zero_bits"].is_none()) {
      r.truth_zero_bits = d["truth_zero_bits"].cast<std::size_t>();
   }
   return r;
}

LatticeBasis basis_from(const std::vector<std::vector<py::int_>>& rows) {
   LatticeBasis b;
   for(const auto& r : rows) {
      std::vector<Nat> row;
      for(const auto& v : r) row.push_back(to_nat(v));
      b.rows.push_back(std::move(row));
   }
   return b;
}

py::dict report_dict(const DrillReport& r) {
   py::dict d;
   d["success"] = r.success;
   d["key"] = r.success ? py::object(to_py(r.key)) : py::object(py::none());
   d["tries"] = r.tries;
   d["attack_seconds"] = r.attack_seconds;
   d["total_seconds"] = r.total_seconds;
   d["signatures"] = r.signatures;
   d["true_samples"] = r.true_samples;
   d["d_subset"] = r.d_subset;
   return d;
}

}  // namespace

PYBIND11_MODULE(_sleepspike, m) {
   m.doc() = "Sleep-spike nonce leakage simulator and lattice key recovery";

   py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);

   m.def("curve_names", &curve_names);
   m.def("engine_names", [] {
      std::vector<std::string> out;
      for(Engine e : all_engines()) out.emplace_back(engine_name(e));
      return out;
   });
   m.def(
      "curve_order", [](const std::string& c) { return to_py(curve(c).n); }, py::arg("curve"));

   m.def(
      "keygen",
      [](const std::string& c, std::uint64_t seed) {
         const CurveParams& cp = curve(c);
         Rng rng(mix_seed(seed, 0x6b6579));
         const PrivateKey k = generate_key(cp, rng);
         return py::make_tuple(to_py(k.d), encode_point(public_key(k, cp).q, cp));
      },
      py::arg("curve") = "p256", py::arg("seed") = 0, "Returns (private scalar, uncompressed public key hex).");

   m.def(
      "public_key",
      [](const py::int_& d, const std::string& c) { return encode_point(public_key({to_nat(d)}, curve(c)).q, curve(c)); },
      py::arg("d"), py::arg("curve") = "p256");

   m.def(
      "scalar_mul",
      [](const py::int_& k, const std::string& c, const std::string& engine) {
         return point(engine_base_mul(engine_from_name(engine), to_nat(k), curve(c)));
      },
      py::arg("k"), py::arg("curve") = "p256", py::arg("engine") = "w4_identity_table",
      "[k]G through an engine; None for the point at infinity.");

   m.def(
      "activity",
      [](const py::int_& k, const std::string& c, const std::string& engine) {
         ActivityTrace t;
         engine_base_mul(engine_from_name(engine), to_nat(k), curve(c), &t);
         py::list out;
         for(const auto& a : t.records) {
            py::dict d;
            d["window_index"] = a.window_index;
            d["hw_acc"] = a.hw_acc;
            d["hd_acc"] = a.hd_acc;
            d["hw_selected"] = a.hw_selected;
            d["zero_window"] = a.zero_window;
            d["acc_zero"] = a.acc_zero;
            out.append(d);
         }
         return out;
      },
      py::arg("k"), py::arg("curve") = "p256", py::arg("engine") = "w4_identity_table");

   m.def(
      "sign",
      [](const py::bytes& msg, const py::int_& d, const std::string& c, const std::string& engine,
         const std::optional<py::int_>& nonce) {
         NoncePolicy policy = Rfc6979Nonce{};
         if(nonce) policy = InjectedNonce{to_nat(*nonce)};
         const SignResult r = ecdsa_sign_detailed(to_bytes(msg), {to_nat(d)}, policy, curve(c), engine_from_name(engine));
         py::dict out;
         out["r"] = to_py(r.sig.r);
         out["s"] = to_py(r.sig.s);
         out["k"] = to_py(r.k);
         out["h"] = to_py(r.h);
         return out;
      },
      py::arg("message"), py::arg("d"), py::arg("curve") = "p256", py::arg("engine") = "w4_identity_table",
      py::arg("nonce") = py::none(), "ECDSA signature; RFC 6979 nonce unless one is injected.");

   m.def(
      "verify",
      [](const py::bytes& msg, const py::int_& r, const py::int_& s, const std::string& pub, const std::string& c) {
         return ecdsa_verify(to_bytes(msg), {to_nat(r), to_nat(s)}, {decode_point(pub, curve(c))}, curve(c));
      },
      py::arg("message"), py::arg("r"), py::arg("s"), py::arg("pub"), py::arg("curve") = "p256");

   m.def(
      "simulate",
      [](const std::string& engine, std::size_t traces, std::size_t iterations, std::size_t z_min, std::size_t z_max,
         std::size_t per_class, const std::string& grouping, const std::string& c, std::uint64_t seed, double beta0,
         double beta1, double beta2, double sigma, std::size_t window, double decay) {
         const CurveParams& cp = curve(c);
         Rng krng(mix_seed(seed, 0x6b6579));
         const PrivateKey key = generate_key(cp, krng);
         Rng rng(mix_seed(seed, 0x6d7367));
         ExperimentPlan plan;
         plan.engine = engine_from_name(engine);
         plan.traces = traces;
         plan.iterations = iterations;
         plan.messages = class_messages(z_min, z_max, per_class, grouping_from_name(grouping), ZeroEnd::leading, cp, rng);
         plan.seed = seed;
         py::list out;
         for(const auto& r : run_plan(plan, key, cp, leakage(beta0, beta1, beta2, sigma, window, decay))) {
            out.append(record_dict(r));
         }
         return out;
      },
      py::arg("engine") = "w4_identity_table", py::arg("traces") = 24, py::arg("iterations") = 20,
      py::arg("z_min") = 0, py::arg("z_max") = 5, py::arg("per_class") = 4, py::arg("grouping") = "nibbles",
      py::arg("curve") = "p256", py::arg("seed") = 0, py::arg("beta0") = 1.0, py::arg("beta1") = 0.002,
      py::arg("beta2") = 0.01, py::arg("sigma") = 0.03, py::arg("residual_window") = 64, py::arg("decay") = 0.98,
      "Spike records for injected-nonce classes, one dict per trace.");

   m.def(
      "figure",
      [](const std::vector<py::dict>& records, const std::string& grouping, std::size_t per_class) {
         std::vector<SpikeRecord> recs;
         for(const auto& d : records) recs.push_back(record_from(d));
         py::list out;
         for(const auto& p : figure_series(recs, grouping_from_name(grouping), per_class)) {
            py::dict d;
            d["z"] = p.z;
            d["mean_spike"] = p.mean_spike;
            d["std"] = p.std_spike;
            d["count"] = p.count;
            out.append(d);
         }
         return out;
      },
      py::arg("records"), py::arg("grouping") = "nibbles", py::arg("messages_per_class") = 4);

   m.def("moving_average", &moving_average, py::arg("values"), py::arg("window") = 10);
   m.def("extract_peak", &extract_peak, py::arg("filtered"));

   m.def(
      "select_low_spike",
      [](const std::vector<py::dict>& records, int ell, double margin) {
         std::vector<SpikeRecord> recs;
         for(const auto& d : records) recs.push_back(record_from(d));
         SelectionConfig cfg;
         cfg.claimed_zero_bits = ell;
         cfg.margin = margin;
         return select_low_spike(summarize(recs), cfg);
      },
      py::arg("records"), py::arg("ell") = 12, py::arg("margin") = 1.5,
      "Message ids with the lowest mean spikes, rank mode.");

   m.def(
      "lll_reduce",
      [](const std::vector<std::vector<py::int_>>& rows, double delta) {
         const LatticeBasis r = lll_reduce(basis_from(rows), LllParams{delta});
         std::vector<std::vector<py::int_>> out;
         for(const auto& row : r.rows) {
            std::vector<py::int_> v;
            for(const auto& x : row) v.push_back(to_py(x));
            out.push_back(std::move(v));
         }
         return out;
      },
      py::arg("rows"), py::arg("delta") = 0.99);

   m.def(
      "is_lll_reduced",
      [](const std::vector<std::vector<py::int_>>& rows, double delta) { return check_lll(basis_from(rows), delta).ok(); },
      py::arg("rows"), py::arg("delta") = 0.99);

   m.def(
      "oracle_attack",
      [](const std::string& c, int ell, std::size_t signatures, std::uint64_t seed) {
         const CurveParams& cp = curve(c);
         Rng rng(mix_seed(seed, 0x6b6579));
         const PrivateKey key = generate_key(cp, rng);
         OracleDrill cfg;
         cfg.ell = ell;
         cfg.signatures = signatures;
         cfg.seed = seed;
         py::dict out = report_dict(run_oracle_drill(cfg, key, cp));
         out["expected_key"] = to_py(key.d);
         return out;
      },
      py::arg("curve") = "secp128r1", py::arg("ell") = 16, py::arg("signatures") = 12, py::arg("seed") = 0,
      "Signs with short injected nonces and recovers the key through the lattice.");
}

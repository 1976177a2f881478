#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/io/serialize.hpp"
#include "ulat/k2/rewrite.hpp"
#include "ulat/matgroup/factor.hpp"
#include "ulat/matgroup/group.hpp"
#include "ulat/spectral/cayley.hpp"
#include "ulat/spectral/gap.hpp"
#include "ulat/spectral/tau.hpp"

namespace {

using ulat::Errc;
using ulat::io::json;

enum Exit { kOk = 0, kOther = 1, kSpec = 2, kNotSl = 3, kCertificate = 4, kNoConvergence = 5 };

struct RunConfig {
  std::string spec, ring, matrix, cert, out, format = "json";
  std::string a, b, genset = "f1", method = "auto";
  std::vector<std::string> alpha;
  std::size_t d = 0;
  int k = 0;
  std::string be;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000;
  std::uint64_t size_cap = ulat::kDefaultSizeCap;
  std::uint64_t order_cap = ulat::kDefaultOrderCap;
  bool exhaustive = false;
};

// Certificate failures are reported with their own exit code from the
// subcommand; this maps library errors.
int exit_code(Errc e) {
  switch (e) {
    case Errc::ParseError:
    case Errc::SpanIncomplete:
    case Errc::NotUnital:
    case Errc::InvalidRing:
    case Errc::SizeCap:
    case Errc::BadDimension:
    case Errc::NotLocal:
    case Errc::NotUnit:
      return kSpec;
    case Errc::NotSL:
      return kNotSl;
    case Errc::NoConvergence:
      return kNoConvergence;
    default:
      return kOther;
  }
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ulat::Error(Errc::ParseError, "cannot write " + c.out);
  f << text << '\n';
}

void emit(const RunConfig& c, const json& j) { emit(c, j.dump(2)); }

json ring_spec(const RunConfig& c) {
  const std::string& path = c.spec.empty() ? c.ring : c.spec;
  if (path.empty()) throw ulat::Error(Errc::ParseError, "a ring spec file is required (--spec or --ring)");
  return ulat::io::read_json_file(path);
}

int cmd_ring(const std::string& action, const RunConfig& c) {
  const auto R = ulat::io::ring_from_json(ring_spec(c), c.size_cap);
  if (action == "info") emit(c, ulat::io::ring_info(R));
  if (action == "decompose") emit(c, ulat::io::decomposition_json(R, ulat::decompose_local(R)));
  if (action == "local") emit(c, ulat::io::local_json(ulat::local_structure(R)));
  return kOk;
}

int cmd_sl_factor(const RunConfig& c) {
  const auto R = ulat::io::ring_from_json(ring_spec(c), c.size_cap);
  if (c.matrix.empty()) throw ulat::Error(Errc::ParseError, "--matrix is required");
  const auto M = ulat::io::matrix_from_json(R, ulat::io::read_json_file(c.matrix));
  if (c.d != 0 && M.d != c.d) throw ulat::Error(Errc::BadDimension, "matrix dimension differs from --d");
  const auto w = ulat::factor(R, M);
  json out = ulat::io::to_json(w);
  out["verified"] = ulat::verify_word(R, w, M);
  emit(c, out);
  return out["verified"].get<bool>() ? kOk : kOther;
}

int cmd_sl_sweep(const RunConfig& c) {
  const auto R = ulat::io::ring_from_json(ring_spec(c), c.size_cap);
  if (c.d < 2) throw ulat::Error(Errc::BadDimension, "--d must be at least 2");
  const ulat::SlFactorizer fz(R);
  const auto sched = ulat::schedule(c.d);
  std::vector<ulat::Matrix> mats;
  if (c.exhaustive) {
    mats = ulat::enumerate_group(R, c.d, ulat::generating_set(R, c.d), c.order_cap).elements;
  } else {
    std::mt19937_64 rng(c.seed);
    for (std::uint64_t i = 0; i < c.samples; ++i) mats.push_back(ulat::random_sl(R, c.d, rng));
  }
  std::size_t max_len = 0, failures = 0;
  std::vector<std::size_t> stage_max(c.d - 1, 0);
  for (const auto& m : mats) {
    const auto w = fz.factor(m);
    max_len = std::max(max_len, w.nonzero_length());
    failures += !ulat::verify_word(R, w, m);
    const auto counts = ulat::stage_counts(w, sched);
    for (std::size_t s = 0; s < counts.size(); ++s) stage_max[s] = std::max(stage_max[s], counts[s]);
  }
  emit(c, json{{"ring", R.label()},
               {"d", c.d},
               {"mode", c.exhaustive ? "exhaustive" : "sampled"},
               {"seed", c.exhaustive ? json(nullptr) : json(c.seed)},
               {"count", mats.size()},
               {"bound", sched.bound()},
               {"max_length", max_len},
               {"stage_max", stage_max},
               {"failures", failures}});
  return failures == 0 && max_len <= sched.bound() ? kOk : kOther;
}

int cmd_k2_rewrite(const RunConfig& c) {
  const json spec = ring_spec(c);
  const auto R = ulat::io::ring_from_json(spec, c.size_cap);
  const auto L = ulat::local_structure(R);
  if (c.a.empty() || c.b.empty()) throw ulat::Error(Errc::ParseError, "--a and --b are required");
  const auto cert = ulat::rewrite_symbol(L, ulat::io::element_from_string(R, c.a), ulat::io::element_from_string(R, c.b));
  const auto check = ulat::check_certificate(L, cert);
  json out = ulat::io::certificate_json(spec, cert);
  out["tform_symbols"] = ulat::io::to_json(cert.tform.symbols(R));
  out["valid"] = check.ok;
  if (!check.ok) out["failure"] = {{"step", check.step}, {"reason", check.reason}};
  emit(c, out);
  if (!check.ok) std::cerr << "certificate check failed at step " << check.step << ": " << check.reason << '\n';
  return check.ok ? kOk : kCertificate;
}

int cmd_k2_check(const RunConfig& c) {
  if (c.cert.empty()) throw ulat::Error(Errc::ParseError, "--cert is required");
  const json j = ulat::io::read_json_file(c.cert);
  const json spec = c.ring.empty() && c.spec.empty() ? ulat::io::field<json>(j, "ring") : ring_spec(c);
  const auto R = ulat::io::ring_from_json(spec, c.size_cap);
  const auto L = ulat::local_structure(R);
  ulat::CheckResult r;
  try {
    r = ulat::check_certificate(L, ulat::io::certificate_from_json(R, j));
  } catch (const ulat::Error& e) {
    r = {false, 0, e.what()};
  }
  json out = {{"valid", r.ok}};
  if (!r.ok) out["failure"] = {{"step", r.step}, {"reason", r.reason}};
  emit(c, out);
  if (!r.ok) std::cerr << "certificate rejected at step " << r.step << ": " << r.reason << '\n';
  return r.ok ? kOk : kCertificate;
}

int cmd_tau(const RunConfig& c) {
  std::optional<ulat::cpp_rational> be;
  if (!c.be.empty()) be = ulat::parse_rational(c.be);
  const auto r = ulat::tau_bound(static_cast<int>(c.d), c.k, be);
  if (c.format == "csv") {
    std::string text = "d,k,M_bound,K_dk,weakened,N,shalom_bound\n";
    text += std::to_string(r.d) + "," + std::to_string(r.k) + "," + r.m_bound.str() + "," +
            ulat::rational_string(r.kazhdan) + "," + ulat::rational_string(r.weakened) + "," + r.word_length.str() +
            "," + (r.shalom ? ulat::rational_string(*r.shalom) : "");
    emit(c, text);
  } else {
    emit(c, ulat::io::to_json(r));
  }
  return kOk;
}

int cmd_spectral(const RunConfig& c) {
  const auto R = ulat::io::ring_from_json(ring_spec(c), c.size_cap);
  std::vector<ulat::RingElement> alphas;
  if (c.genset == "f1f2") {
    if (c.alpha.empty()) {
      for (std::size_t i = 0; i < R.dim(); ++i)
        if (!R.is_one(R.basis(i))) alphas.push_back(R.basis(i));
    } else {
      for (const auto& s : c.alpha) alphas.push_back(ulat::io::element_from_string(R, s));
    }
  }
  const auto g = ulat::build_cayley(R, c.d, ulat::generating_set(R, c.d, alphas), c.order_cap);
  ulat::SpectralOptions o;
  o.tol = c.tol;
  o.seed = c.seed;
  o.method = c.method == "dense" ? ulat::GapMethod::Dense
             : c.method == "iterative" ? ulat::GapMethod::Iterative
                                       : ulat::GapMethod::Auto;
  const auto r = ulat::spectral_gap(g.graph, o);
  if (c.format == "json") {
    json out = ulat::io::to_json(r);
    out["ring"] = R.label();
    out["d"] = c.d;
    emit(c, out);
  } else {
    emit(c, ulat::spectral_csv_header() + "\n" + ulat::spectral_csv_row(R.label(), c.d, r));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ulat: finite rings, elementary factorizations, K2 symbols and spectral gaps"};
  app.require_subcommand(1);
  RunConfig c;

  auto ring_opts = [&](CLI::App* s) {
    s->add_option("--spec,--ring", c.spec, "ring spec JSON file");
    s->add_option("--size-cap", c.size_cap, "largest ring size accepted");
    s->add_option("--out", c.out, "write the artifact here instead of stdout");
  };

  auto* ring = app.add_subcommand("ring", "ring structure reports")->require_subcommand(1);
  std::string ring_action;
  for (const char* a : {"info", "decompose", "local"}) {
    auto* s = ring->add_subcommand(a);
    ring_opts(s);
    s->callback([&, a] { ring_action = a; });
  }

  auto* sl = app.add_subcommand("sl", "elementary factorization")->require_subcommand(1);
  auto* sl_factor = sl->add_subcommand("factor", "factor one matrix");
  ring_opts(sl_factor);
  sl_factor->add_option("--matrix", c.matrix, "matrix JSON file")->required();
  sl_factor->add_option("--d", c.d, "expected dimension");
  auto* sl_sweep = sl->add_subcommand("sweep", "factor many matrices and report lengths");
  ring_opts(sl_sweep);
  sl_sweep->add_option("--d", c.d)->required();
  sl_sweep->add_flag("--exhaustive", c.exhaustive, "enumerate all of SL_d(R)");
  sl_sweep->add_option("--samples", c.samples, "sample count when not exhaustive");
  sl_sweep->add_option("--seed", c.seed);
  sl_sweep->add_option("--order-cap", c.order_cap);

  auto* k2 = app.add_subcommand("k2", "symbol rewriting")->require_subcommand(1);
  auto* k2_rewrite = k2->add_subcommand("rewrite", "rewrite {a,b} with a certificate");
  ring_opts(k2_rewrite);
  k2_rewrite->add_option("--a", c.a, "unit, integer or coefficient list")->required();
  k2_rewrite->add_option("--b", c.b, "unit, integer or coefficient list")->required();
  auto* k2_check = k2->add_subcommand("check", "replay a certificate");
  ring_opts(k2_check);
  k2_check->add_option("--cert", c.cert, "certificate JSON file")->required();

  auto* tau = app.add_subcommand("tau", "exact constants")->require_subcommand(1);
  auto* tau_bound = tau->add_subcommand("bound");
  tau_bound->add_option("--d", c.d)->required();
  tau_bound->add_option("--k", c.k)->required();
  tau_bound->add_option("--be", c.be, "optional BE constant (p, p/q or decimal)");
  tau_bound->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  tau_bound->add_option("--out", c.out);

  auto* spectral = app.add_subcommand("spectral", "Cayley graph spectra")->require_subcommand(1);
  auto* gap = spectral->add_subcommand("gap");
  ring_opts(gap);
  gap->add_option("--d", c.d)->required();
  gap->add_option("--genset", c.genset)->check(CLI::IsMember({"f1", "f1f2"}));
  gap->add_option("--alpha", c.alpha, "ring generators for the second family (default: non-identity basis)");
  gap->add_option("--method", c.method)->check(CLI::IsMember({"auto", "dense", "iterative"}));
  gap->add_option("--tol", c.tol);
  gap->add_option("--seed", c.seed);
  gap->add_option("--order-cap", c.order_cap);
  std::string gap_format = "csv";
  gap->add_option("--format", gap_format)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSpec;
  }

  try {
    if (ring->parsed()) return cmd_ring(ring_action, c);
    if (sl_factor->parsed()) return cmd_sl_factor(c);
    if (sl_sweep->parsed()) return cmd_sl_sweep(c);
    if (k2_rewrite->parsed()) return cmd_k2_rewrite(c);
    if (k2_check->parsed()) return cmd_k2_check(c);
    if (tau_bound->parsed()) return cmd_tau(c);
    if (gap->parsed()) {
      c.format = gap_format;
      return cmd_spectral(c);
    }
  } catch (const ulat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}

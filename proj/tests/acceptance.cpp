// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/gap_baselines.hpp"
#include "support/k2_support.hpp"
#include "ulat/finring/builders.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/finring/radical.hpp"
#include "ulat/k2/rewrite.hpp"
#include "ulat/matgroup/factor.hpp"
#include "ulat/matgroup/group.hpp"
#include "ulat/spectral/cayley.hpp"
#include "ulat/spectral/gap.hpp"
#include "ulat/spectral/tau.hpp"
#include "ulat/steinberg.hpp"

namespace {

using ulat::FiniteRing;
using ulat::Matrix;
using ulat::RingElement;

// Pinned tolerances and limits.
constexpr double kReferenceTol = 1e-12;    // K4, C8 spectra
constexpr double kAgreeTol = 1e-6;         // dense vs iterative
constexpr double kBaselineTol = 1e-9;      // stored gap baselines
constexpr double kResidualTol = 1e-10;     // eigen residuals
constexpr double kLimit1 = 120, kLimit5 = 300, kLimit8 = 180;  // seconds
constexpr std::size_t kSamples = 10000;
constexpr std::size_t kMutations = 100;
constexpr std::size_t kRelationSamples = 100;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

FiniteRing f4() { return ulat::make_quotient(2, {"x"}, {"x^2+x+1"}, {"1", "x"}); }
FiniteRing f8() { return ulat::make_quotient(2, {"x"}, {"x^3+x+1"}, {"1", "x", "x^2"}); }
FiniteRing z4t() { return ulat::make_quotient(4, {"t"}, {"t^2", "2*t"}, {"1", "t"}); }

std::vector<ulat::testing::NamedRing> structure_suite() {
  std::vector<ulat::testing::NamedRing> out;
  for (int n : {2, 4, 6, 8, 9, 10, 12, 16, 25, 27, 30, 36, 60})
    out.push_back({"Z/" + std::to_string(n), ulat::make_zmod(n)});
  out.push_back({"F4", f4()});
  out.push_back({"F8", f8()});
  out.push_back({"F2[t]/(t^3)", ulat::make_quotient(2, {"t"}, {"t^3"}, {"1", "t", "t^2"})});
  out.push_back({"F3[t]/(t^2)", ulat::make_quotient(3, {"t"}, {"t^2"}, {"1", "t"})});
  out.push_back({"(Z/4)[t]/(t^2,2t)", z4t()});
  out.push_back({"Z/4 x Z/3", ulat::make_product({ulat::make_zmod(4), ulat::make_zmod(3)})});
  out.push_back({"F4 x Z/9", ulat::make_product({f4(), ulat::make_zmod(9)})});
  out.push_back({"Z/2 x Z/2 x Z/2", ulat::make_product({ulat::make_zmod(2), ulat::make_zmod(2), ulat::make_zmod(2)})});
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------ 1 and 2

struct WordStats {
  std::size_t words = 0, max_len = 0, replay_fail = 0, bound_fail = 0, schedule_fail = 0, stage_fail = 0;
};

void check_word(const FiniteRing& R, const ulat::SlFactorizer& fz, const Matrix& m, WordStats& s) {
  const auto w = fz.factor(m);
  const auto sched = ulat::schedule(m.d);
  ++s.words;
  s.max_len = std::max(s.max_len, w.nonzero_length());
  s.replay_fail += ulat::replay(R, w, m.d) != m;
  s.bound_fail += w.nonzero_length() > ulat::schedule_length(m.d);
  bool aligned = w.factors.size() == sched.slots.size();
  for (std::size_t k = 0; aligned && k < sched.slots.size(); ++k)
    aligned = w.factors[k].side == sched.slots[k].side && w.factors[k].i == sched.slots[k].i &&
              w.factors[k].j == sched.slots[k].j;
  s.schedule_fail += !aligned;
  const auto counts = ulat::stage_counts(w, sched);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const std::size_t m_stage = m.d - k;
    s.stage_fail += counts[k] > 3 * m_stage - 2;
  }
}

std::pair<Outcome, Outcome> criteria_1_2() {
  Outcome c1, c2;
  const auto t0 = std::chrono::steady_clock::now();
  WordStats all;
  struct Exhaustive {
    int n;
    std::size_t d, order;
  };
  for (const auto e : {Exhaustive{4, 2, 48}, Exhaustive{9, 2, 648}, Exhaustive{2, 3, 168}}) {
    const FiniteRing R = ulat::make_zmod(e.n);
    const ulat::SlFactorizer fz(R);
    const auto group = ulat::enumerate_group(R, e.d, ulat::generating_set(R, e.d));
    c1.require(group.size() == e.order, "SL_" + std::to_string(e.d) + "(Z/" + std::to_string(e.n) + ") order");
    WordStats s;
    for (const auto& m : group.elements) check_word(R, fz, m, s);
    c1.detail << "SL" << e.d << "(Z/" << e.n << ") " << s.words << " words max " << s.max_len << "; ";
    all.words += s.words;
    all.max_len = std::max(all.max_len, s.max_len);
    all.replay_fail += s.replay_fail;
    all.bound_fail += s.bound_fail;
    all.schedule_fail += s.schedule_fail;
    all.stage_fail += s.stage_fail;
  }
  for (int n : {4, 6}) {
    const FiniteRing R = ulat::make_zmod(n);
    const ulat::SlFactorizer fz(R);
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(n));
    WordStats s;
    for (std::size_t i = 0; i < kSamples; ++i) check_word(R, fz, ulat::random_sl(R, 3, rng), s);
    if (n == 4) c1.require(ulat::sl_order(R, 3) == 43008, "|SL3(Z/4)| = 43008");
    c1.detail << "SL3(Z/" << n << ") " << s.words << " samples max " << s.max_len << "; ";
    all.replay_fail += s.replay_fail;
    all.bound_fail += s.bound_fail;
    all.schedule_fail += s.schedule_fail;
    all.stage_fail += s.stage_fail;
  }
  const double secs = seconds_since(t0);
  c1.require(all.replay_fail == 0, "replay mismatch");
  c1.require(all.bound_fail == 0, "length above (3d^2-d-2)/2");
  c1.require(secs < kLimit1, "runtime");
  c1.detail << "replay failures " << all.replay_fail << ", bound violations " << all.bound_fail << ", "
            << secs << " s";
  c2.require(all.schedule_fail == 0, "slot schedule differs");
  c2.require(all.stage_fail == 0, "stage count above 3m-2");
  c2.detail << "schedule mismatches " << all.schedule_fail << ", stage violations " << all.stage_fail;
  return {std::move(c1), std::move(c2)};
}

// ------------------------------------------------------------------ 3

std::vector<std::uint64_t> prime_power_sizes(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    std::uint64_t q = 1;
    while (n % p == 0) {
      n /= p;
      q *= p;
    }
    if (q > 1) out.push_back(q);
  }
  if (n > 1) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

bool nilpotent_by_powers(const FiniteRing& R, const RingElement& a) {
  RingElement x = a;
  for (std::uint64_t i = 0; i <= R.size(); ++i) {
    if (R.is_zero(x)) return true;
    x = R.mul(x, a);
  }
  return false;
}

Outcome criterion_3() {
  Outcome c;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t mismatched = 0;
  for (std::int64_t n = 2; n <= 10000; ++n) {
    const auto d = ulat::decompose_local(ulat::make_zmod(n));
    std::vector<std::uint64_t> sizes;
    for (const auto& comp : d.components) sizes.push_back(comp.ring.size());
    std::sort(sizes.begin(), sizes.end());
    if (sizes != prime_power_sizes(static_cast<std::uint64_t>(n))) {
      if (mismatched == 0) c.require(false, "Z/" + std::to_string(n) + " component sizes");
      ++mismatched;
    }
  }
  c.detail << "Z/n for n <= 10000: " << mismatched << " mismatches in " << seconds_since(t0) << " s; ";
  std::size_t rings = 0, elements = 0;
  for (const auto& [name, R] : structure_suite()) {
    if (R.size() > 4096) continue;
    ++rings;
    const auto d = ulat::decompose_local(R);
    for (const auto& comp : d.components)
      comp.ring.for_each_element([&](const RingElement& x) {
        c.require(comp.ring.is_unit(x) || nilpotent_by_powers(comp.ring, x), name + " component not local");
      });
    R.for_each_element([&](const RingElement& x) {
      ++elements;
      c.require(d.recompose(R, x) == x, name + " recomposition");
    });
  }
  c.detail << rings << " suite rings, " << elements << " elements recomposed";
  return c;
}

// ------------------------------------------------------------------ 4

Outcome criterion_4() {
  Outcome c;
  std::size_t pairs = 0, max_reduced = 0;
  const std::vector<ulat::testing::NamedRing> rings{{"Z/8", ulat::make_zmod(8)},   {"Z/9", ulat::make_zmod(9)},
                                                    {"F4", f4()},                  {"F8", f8()},
                                                    {"Z/16", ulat::make_zmod(16)}, {"(Z/4)[t]/(t^2,2t)", z4t()}};
  for (const auto& [name, R] : rings) {
    const Matrix id = ulat::identity(R, 3);
    for (const auto& u : ulat::testing::units_of(R))
      for (const auto& v : ulat::testing::units_of(R)) {
        ++pairs;
        const auto w = ulat::symbol_word(R, u, v);
        const auto r = ulat::st_reduce(R, w);
        max_reduced = std::max(max_reduced, r.size());
        c.require(w.size() == 18, name + " raw length");
        c.require(r.size() <= 13, name + " reduced length");
        c.require(ulat::phi(R, w, 3) == id && ulat::phi(R, r, 3) == id, name + " phi image");
      }
  }
  c.detail << pairs << " unit pairs, raw 18, max reduced " << max_reduced;
  return c;
}

// ------------------------------------------------------------------ 5

Outcome criterion_5() {
  Outcome c;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t certs = 0, rejected = 0, mutations = 0, max_tform = 0;
  for (const auto& [name, R] : ulat::testing::rewrite_suite()) {
    const auto L = ulat::local_structure(R);
    const std::size_t g = L.min_gens.size();
    std::vector<ulat::Certificate> pool;
    for (const auto& [a, b] : ulat::testing::unit_pairs(R, 500, 17)) {
      ulat::Certificate cert;
      try {
        cert = ulat::rewrite_symbol(L, a, b);
      } catch (const ulat::Error& e) {
        c.require(false, name + " rewrite threw " + e.what());
        continue;
      }
      ++certs;
      const auto size = cert.tform.symbols(R).size();
      max_tform = std::max(max_tform, size);
      c.require(cert.rounds <= 2 * L.nilpotency_index - 1, name + " round count");
      c.require(size <= g + 1, name + " T-form size");
      const auto r = ulat::check_certificate(L, cert);
      c.require(r.ok, name + " certificate: " + r.reason);
      if (!cert.steps.empty()) pool.push_back(std::move(cert));
    }
    c.require(!pool.empty(), name + " has no non-trivial certificate");
    std::mt19937_64 rng(4242);
    for (std::size_t k = 0; k < kMutations && !pool.empty(); ++k) {
      auto bad = pool[rng() % pool.size()];
      if (!ulat::testing::corrupt_parameter(R, bad, rng)) continue;
      ++mutations;
      const bool caught = !ulat::check_certificate(L, bad).ok;
      rejected += caught;
      c.require(caught, name + " accepted a corrupted certificate");
    }
  }
  const double secs = seconds_since(t0);
  c.require(secs < kLimit5, "runtime");
  c.detail << certs << " certificates valid, max T-form " << max_tform << ", " << rejected << "/" << mutations
           << " corruptions rejected, " << secs << " s";
  return c;
}

// ------------------------------------------------------------------ 6

Outcome criterion_6() {
  Outcome c;
  const auto r = ulat::tau_bound(3, 0);
  c.require(r.kazhdan == ulat::cpp_rational(1, 1034), "K_{3,0}");
  c.require(r.weakened == ulat::cpp_rational(1, 1056), "weakened bound (3,0)");
  c.require(r.word_length == 47, "N");
  std::size_t checked = 0;
  for (int d = 3; d <= 10; ++d)
    for (int k = 0; k <= 8; ++k) {
      const auto b = ulat::tau_bound(d, k);
      ++checked;
      c.require(b.kazhdan >= b.weakened, "K >= weakened at d=" + std::to_string(d) + " k=" + std::to_string(k));
      c.require((b.kazhdan >= b.weakened) == (d * d + d >= 10), "reduction to d^2+d >= 10");
    }
  c.detail << "tau_bound(3,0) = (" << ulat::rational_string(r.kazhdan) << ", " << ulat::rational_string(r.weakened)
           << ", N=" << r.word_length << "), " << checked << " (d,k) pairs compared exactly";
  return c;
}

// ------------------------------------------------------------------ 7

Outcome criterion_7() {
  Outcome c;
  std::size_t checked = 0, failures = 0;
  for (const auto& [name, R] : structure_suite())
    for (std::size_t d : {3, 4}) {
      const auto rep = ulat::check_relations(R, d, kRelationSamples, 99 + d);
      checked += rep.checked;
      failures += rep.failures.size();
      if (!rep.ok()) c.require(false, name + " d=" + std::to_string(d) + " " + rep.failures.front());
    }
  c.detail << checked << " relation instances, " << failures << " failures";
  return c;
}

// ------------------------------------------------------------------ 8

ulat::RegularGraph circulant(std::size_t n, const std::vector<std::size_t>& steps) {
  ulat::RegularGraph g{n, steps.size(), {}};
  for (std::size_t v = 0; v < n; ++v)
    for (auto s : steps) g.nbr.push_back(static_cast<std::uint32_t>((v + s) % n));
  return g;
}

Outcome criterion_8() {
  Outcome c;
  const auto t0 = std::chrono::steady_clock::now();
  struct Count {
    int n;
    std::size_t d, order;
  };
  for (const auto e : {Count{3, 2, 24}, Count{2, 3, 168}, Count{4, 2, 48}, Count{3, 3, 5616}}) {
    const FiniteRing R = ulat::make_zmod(e.n);
    const auto g = ulat::build_cayley(R, e.d, ulat::generating_set(R, e.d));
    c.require(g.graph.vertices == e.order && ulat::sl_order(R, e.d) == e.order,
              "vertex count SL" + std::to_string(e.d) + "(Z/" + std::to_string(e.n) + ")");
  }
  ulat::SpectralOptions dense, iter;
  dense.method = ulat::GapMethod::Dense;
  iter.method = ulat::GapMethod::Iterative;
  dense.tol = iter.tol = kResidualTol;
  for (const auto& o : {dense, iter}) {
    const auto k4 = ulat::spectral_gap(circulant(4, {1, 2, 3}), o);
    const auto c8 = ulat::spectral_gap(circulant(8, {1, 7}), o);
    c.require(std::abs(k4.lambda2 + 1.0 / 3.0) <= kReferenceTol, "K4 spectrum");
    c.require(std::abs(c8.lambda2 - std::sqrt(2.0) / 2.0) <= kReferenceTol, "C8 spectrum");
  }
  {
    const FiniteRing R = ulat::make_zmod(2);
    const auto g = ulat::build_cayley(R, 3, ulat::generating_set(R, 3)).graph;
    const double diff =
        std::abs(ulat::spectral_gap(g, dense).lambda2 - ulat::spectral_gap(g, iter).lambda2);
    c.require(diff <= kAgreeTol, "dense vs iterative on SL3(Z/2)");
    c.detail << "dense-iterative difference " << diff << "; ";
  }
  for (const auto& b : ulat::testing::load_gap_baselines(ULAT_TEST_DATA_DIR "/gap_baselines.csv")) {
    const FiniteRing R = ulat::make_zmod(b.modulus);
    const auto r = ulat::spectral_gap(ulat::build_cayley(R, b.d, ulat::generating_set(R, b.d)).graph);
    c.require(r.gap > 0, "gap positive");
    c.require(r.residual <= kResidualTol, "residual");
    c.require(std::abs(r.lambda2 - b.lambda2) <= kBaselineTol, "baseline Z/" + std::to_string(b.modulus));
    c.detail << "SL" << b.d << "(Z/" << b.modulus << ") gap " << r.gap << "; ";
  }
  const double secs = seconds_since(t0);
  c.require(secs < kLimit8, "runtime");
  c.detail << secs << " s";
  return c;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, Outcome o) {
    std::printf("criterion %d [%s]: %s - %s\n", id, title, o.ok ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.ok;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      Outcome o;
      o.require(false, std::string("exception: ") + e.what());
      return o;
    }
  };
  {
    auto [c1, c2] = [] {
      try {
        return criteria_1_2();
      } catch (const std::exception& e) {
        Outcome a, b;
        a.require(false, e.what());
        b.require(false, e.what());
        return std::pair<Outcome, Outcome>{std::move(a), std::move(b)};
      }
    }();
    report(1, "factorization bound", std::move(c1));
    report(2, "fixed slot order", std::move(c2));
  }
  report(3, "local decomposition", guarded(criterion_3));
  report(4, "symbol word lengths", guarded(criterion_4));
  report(5, "T-form rewriting", guarded(criterion_5));
  report(6, "exact constants", guarded(criterion_6));
  report(7, "Steinberg relations", guarded(criterion_7));
  report(8, "spectral harness", guarded(criterion_8));
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dci/blocks.hpp"
#include "dci/chain.hpp"
#include "dci/ci.hpp"
#include "dci/closure.hpp"
#include "dci/pipeline.hpp"
#include "dci/scan.hpp"
#include "dci/selftest.hpp"
#include "oracles.hpp"

using namespace dci;

namespace {

// Budgets.
constexpr double kScanSeconds = 60.0;
constexpr double kDegree30Seconds = 5.0;
constexpr double kDegree210Seconds = 120.0;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

bool report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << " [" << title << "]: " << (ok ? "PASS" : "FAIL") << " - " << detail << std::endl;
  return ok;
}

GeneratedGroup joined(const RegularRep& a, const RegularRep& b) {
  auto gens = a.generators();
  for (const auto& g : b.generators()) gens.push_back(g);
  return GeneratedGroup(a.degree(), gens);
}

// Criterion 1.

bool cyclic_witness_ok(std::size_t n, const ScanVerdict& v) {
  if (!v.iso) return false;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = 0; w < n; ++w)
      if (v.s[(w + n - u) % n] != v.t[((*v.iso)[static_cast<Point>(w)] + n - (*v.iso)[static_cast<Point>(u)]) % n])
        return false;
  for (std::size_t a = 1; a < n; ++a) {
    std::size_t g = a, m = n;
    while (m) std::swap(g %= m, m);
    if (g != 1) continue;
    bool same = true;
    for (std::size_t e = 0; e < n && same; ++e) same = v.s[e] == v.t[(a * e) % n];
    if (same) return false;
  }
  return true;
}

bool criterion1() {
  struct Case {
    std::string group;
    std::string verdict;
    std::uint64_t space;
  };
  const std::vector<Case> cases{
      {"z6", "DCI-confirmed", 64}, {"z9", "counterexample", 512}, {"z8", "counterexample", 256}, {"d6", "DCI-confirmed", 64}};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const auto g = parse_group_name(c.group);
    const auto v = dci_scan(g, ScanOptions{});
    const double t = since(t0);
    bool good = v.verdict() == c.verdict && v.space == c.space && v.exhaustive && t < kScanSeconds;
    if (v.kind == ScanVerdict::Kind::counterexample) good = good && cyclic_witness_ok(g.degree(), v);
    ok = ok && good;
    detail << c.group << " " << v.verdict() << " (" << v.space << " sets, " << fmt(t) << ")" << (good ? "" : " MISMATCH")
           << "; ";
  }
  return report(1, "DCI scan ground truths", ok, detail.str());
}

// Criterion 2.

bool criterion2() {
  bool ok = true;
  std::ostringstream detail;
  struct Run {
    std::vector<std::uint64_t> primes;
    std::size_t samples;
    double budget;
  };
  for (const auto& run : {Run{{3, 5}, 100, kDegree30Seconds}, Run{{3, 5, 7}, 10, kDegree210Seconds}}) {
    const auto r = regular_dihedral(run.primes);
    std::size_t success = 0;
    double worst = 0;
    std::map<std::string, std::size_t> paths;
    for (std::size_t k = 0; k < run.samples; ++k) {
      const auto rp = r.conjugate(sample_pi(r, std::nullopt, 7, k));
      const auto t0 = Clock::now();
      try {
        ChainSearchOptions chain_opts;
        chain_opts.seed = 7;
        const auto res = run_pipeline(r, rp, {}, chain_opts);
        const double t = since(t0);
        worst = std::max(worst, t);
        const bool good = res.result.ok && res.audit_original && conjugates_into(res.beta, rp, r) &&
                          preserves_orbitals(joined(r, rp), res.beta) && t < run.budget;
        success += good;
        ++paths[res.result.path];
      } catch (const std::exception& e) {
        worst = std::max(worst, since(t0));
        std::cerr << "pipeline sample " << k << ": " << e.what() << "\n";
      }
    }
    ok = ok && success == run.samples;
    detail << "degree " << r.degree() << ": " << success << "/" << run.samples << " (worst " << fmt(worst) << ", paths";
    for (const auto& [p, c] : paths) detail << " " << p << "=" << c;
    detail << "); ";
  }
  return report(2, "conjugation pipeline at desk scale", ok, detail.str());
}

// Criterion 3.

bool criterion3() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [primes, samples] : std::vector<std::pair<std::vector<std::uint64_t>, std::size_t>>{
           {{3, 5}, 100}, {{3, 5, 7}, 10}}) {
    const auto r = regular_dihedral(primes);
    std::size_t good = 0;
    double worst = 0;
    std::map<std::string, std::size_t> strategies;
    for (std::size_t k = 0; k < samples; ++k) {
      const auto rp = r.conjugate(sample_pi(r, std::nullopt, 3, k));
      const auto t0 = Clock::now();
      try {
        const auto c = find_nested_chain(r, rp);
        worst = std::max(worst, since(t0));
        const auto g = joined(c.r, c.rp);
        bool fine = check_nested_chain(c).empty() && joined(r, rp).contains(c.beta);
        for (const auto& p : c.partitions) fine = fine && is_invariant(g, p);
        good += fine;
        ++strategies[c.strategy];
      } catch (const std::exception& e) {
        std::cerr << "chain sample " << k << ": " << e.what() << "\n";
      }
    }
    ok = ok && good == samples;
    detail << "degree " << r.degree() << ": " << good << "/" << samples << " (worst " << fmt(worst);
    for (const auto& [s, c] : strategies) detail << ", " << s << "=" << c;
    detail << "); ";
  }
  return report(3, "nested block chains", ok, detail.str());
}

// Criterion 4.

Permutation random_structured(std::size_t n, std::mt19937_64& rng) {
  // Disjoint cycles of random lengths on shuffled points.
  std::vector<Point> pts(n);
  std::iota(pts.begin(), pts.end(), Point{0});
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<std::vector<Point>> cycles;
  for (std::size_t i = 0; i < n;) {
    const std::size_t len = 1 + rng() % std::min<std::size_t>(n - i, 4);
    cycles.emplace_back(pts.begin() + static_cast<long>(i), pts.begin() + static_cast<long>(i + len));
    i += len;
  }
  return Permutation::from_cycles(n, cycles);
}

GeneratedGroup seeded_small_group(std::size_t k) {
  std::mt19937_64 rng(1000 + k);
  const std::size_t n = 3 + k % 6;
  std::vector<Permutation> gens;
  switch (k % 4) {
    case 0:
      gens.push_back(oracle::random_permutation(n, rng));
      break;
    case 1:
      gens.push_back(oracle::random_permutation(n, rng));
      gens.push_back(oracle::random_permutation(n, rng));
      break;
    case 2:
      gens.push_back(random_structured(n, rng));
      gens.push_back(random_structured(n, rng));
      break;
    default: {
      // A conjugate of the dihedral group of the n-gon.
      std::vector<Point> rot(n), ref(n);
      for (Point i = 0; i < n; ++i) {
        rot[i] = static_cast<Point>((i + 1) % n);
        ref[i] = static_cast<Point>((n - i) % n);
      }
      const auto pi = oracle::random_permutation(n, rng);
      gens.push_back(Permutation(rot).conjugate(pi));
      gens.push_back(Permutation(ref).conjugate(pi));
    }
  }
  return GeneratedGroup(n, gens);
}

// Orbital-preservation filter over all n! permutations, orbitals from the
// brute-force element list.
std::set<Permutation> brute_two_closure(const GeneratedGroup& g) {
  const std::size_t n = g.degree();
  const auto elems = oracle::closure(n, g.generators());
  std::vector<std::size_t> label(n * n, n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (label[u * n + v] != n * n) continue;
      for (const auto& e : elems) label[e[static_cast<Point>(u)] * n + e[static_cast<Point>(v)]] = u * n + v;
    }
  std::set<Permutation> out;
  for (const auto& f : oracle::all_permutations(n)) {
    bool keeps = true;
    for (std::size_t u = 0; u < n && keeps; ++u)
      for (std::size_t v = 0; v < n && keeps; ++v)
        keeps = label[f[static_cast<Point>(u)] * n + f[static_cast<Point>(v)]] == label[u * n + v];
    if (keeps) out.insert(f);
  }
  return out;
}

bool criterion4() {
  std::size_t exact = 0, groups = 0, idempotent = 0, contained = 0, invariance = 0, invariance_pairs = 0;
  std::vector<std::pair<GeneratedGroup, std::vector<Partition>>> suite;
  for (std::size_t k = 0; k < 50; ++k) {
    const auto g = seeded_small_group(k);
    const auto c = two_closure(g);
    exact += oracle::closure(g.degree(), c.generators()) == brute_two_closure(g);
    suite.emplace_back(g, std::vector<Partition>{});
  }
  for (auto primes : {std::vector<std::uint64_t>{3}, std::vector<std::uint64_t>{3, 5}}) {
    const auto r = regular_dihedral(primes);
    suite.emplace_back(r.group(), standard_chain(r));
    for (std::size_t k = 0; k < 5; ++k) {
      const auto rp = r.conjugate(sample_pi(r, std::nullopt, 5, k));
      const auto c = find_nested_chain(r, rp);
      suite.emplace_back(joined(c.r, c.rp), c.partitions);
    }
  }
  for (auto& [g, parts] : suite) {
    ++groups;
    const auto c = two_closure(g);
    const auto cc = two_closure(c);
    idempotent += cc.order() == c.order() && std::all_of(cc.generators().begin(), cc.generators().end(),
                                                         [&](const Permutation& f) { return c.contains(f); });
    contained += std::all_of(g.generators().begin(), g.generators().end(),
                             [&](const Permutation& f) { return c.contains(f); });
    if (!is_transitive(g)) continue;
    for (const auto& p : minimal_block_systems(g)) parts.push_back(p);
    for (const auto& p : parts) {
      if (!is_invariant(g, p)) continue;
      ++invariance_pairs;
      invariance += is_invariant(c, p);
    }
  }
  const bool ok = exact == 50 && idempotent == groups && contained == groups && invariance == invariance_pairs;
  std::ostringstream detail;
  detail << "brute-force equality " << exact << "/50; idempotent " << idempotent << "/" << groups << "; G <= G2 "
         << contained << "/" << groups << "; invariant partitions kept " << invariance << "/" << invariance_pairs;
  return report(4, "2-closure oracle equivalence", ok, detail.str());
}

// Criterion 5 and 7.

bool criterion5(const nlohmann::json& rep) {
  bool ok = rep.at("ok").get<bool>();
  std::size_t checks = 0;
  std::ostringstream bad;
  for (const auto& s : rep.at("suites")) {
    checks += s.at("checks").get<std::size_t>();
    const bool fine = s.at("ok").get<bool>() && s.at("instances").get<std::size_t>() >= 50 &&
                      s.at("vacuous").get<std::size_t>() < s.at("instances").get<std::size_t>();
    if (!fine) bad << " " << s.at("suite").get<std::string>();
    ok = ok && fine;
  }
  std::ostringstream detail;
  detail << rep.at("suites").size() << " suites x " << rep.at("options").at("instances") << " instances, " << checks
         << " checks" << (bad.str().empty() ? "" : ", failing:" + bad.str());
  return report(5, "property suites", ok, detail.str());
}

bool criterion7(const nlohmann::json& first, const SelftestOptions& opts) {
  const auto second = run_selftest(opts);
  const auto a = first.dump(), b = second.dump();
  return report(7, "determinism", a == b, "two selftest runs, " + std::to_string(a.size()) + " bytes, " +
                                               (a == b ? "identical" : "different"));
}

// Criterion 6.

bool criterion6() {
  std::size_t orders = 0, membership = 0, orbit_stab = 0, orbit_checks = 0;
  const auto sym7 = oracle::all_permutations(7);
  for (std::size_t k = 0; k < 100; ++k) {
    std::mt19937_64 rng(5000 + k);
    std::vector<Permutation> gens;
    const std::size_t count = 1 + k % 3;
    for (std::size_t i = 0; i < count; ++i)
      gens.push_back(k % 2 ? random_structured(7, rng) : oracle::random_permutation(7, rng));
    const GeneratedGroup g(7, gens);
    const auto elems = oracle::closure(7, gens);
    orders += g.order() == BigInt(elems.size());
    membership += std::all_of(sym7.begin(), sym7.end(), [&](const Permutation& f) {
      return g.contains(f) == (elems.count(f) > 0);
    });
    for (Point y = 0; y < 7; ++y) {
      ++orbit_checks;
      orbit_stab += g.order() == BigInt(orbit(g, y).size()) * point_stabilizer(g, y).order();
    }
  }
  const bool ok = orders == 100 && membership == 100 && orbit_stab == orbit_checks;
  std::ostringstream detail;
  detail << "order " << orders << "/100; contains " << membership << "/100 (all of Sym(7)); orbit-stabiliser "
         << orbit_stab << "/" << orbit_checks;
  return report(6, "perm-core oracles", ok, detail.str());
}

}  // namespace

int main() {
  bool ok = true;
  ok &= criterion1();
  ok &= criterion2();
  ok &= criterion3();
  ok &= criterion4();
  SelftestOptions opts;
  const auto first = run_selftest(opts);
  ok &= criterion5(first);
  ok &= criterion6();
  ok &= criterion7(first, opts);
  std::cout << (ok ? "all criteria pass" : "some criteria FAIL") << std::endl;
  return ok ? 0 : 1;
}

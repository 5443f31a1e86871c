#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dci/dihedral.hpp"
#include "dci/instance.hpp"

namespace dci {

struct SelftestOptions {
  std::vector<std::uint64_t> primes{3, 5};
  std::size_t instances = 50;
  std::uint64_t seed = 1;
  // nullopt cycles through every family, instance k using family k mod 5.
  std::optional<PiFamily> family;
};

// Outcome of one property suite.  An instance is vacuous when none of the
// suite's hypotheses held on it, so no conclusion was checked.
struct SuiteReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t vacuous = 0;
  std::size_t failure_count = 0;
  std::vector<std::string> failures;  // first few, for triage
  // How often each hypothesis or case was met, so vacuous passes show up.
  std::map<std::string, std::size_t> tally;

  bool ok() const { return failure_count == 0; }
  nlohmann::json to_json() const;
};

// Sample k of a seeded run: pi drawn from the stream seeded by (seed, k),
// with family k mod 5 when no family is given.
Permutation sample_pi(const RegularRep& r, std::optional<PiFamily> family, std::uint64_t seed, std::size_t k);

// Names of every suite, in report order.
const std::vector<std::string>& suite_names();

// The seeded instances shared by all suites; instance k uses sample_pi.
std::vector<ConjugationInstance> selftest_instances(const SelftestOptions& opts);

// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, const std::vector<ConjugationInstance>& instances,
                      const SelftestOptions& opts);

// {"options": {...}, "suites": [...], "ok": bool}.  The report holds no
// timings, so equal options give byte-identical dumps.  An empty name list
// runs every suite.
nlohmann::json run_selftest(const SelftestOptions& opts, const std::vector<std::string>& names = {});

}  // namespace dci

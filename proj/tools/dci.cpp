#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dci/blocks.hpp"
#include "dci/chain.hpp"
#include "dci/ci.hpp"
#include "dci/closure.hpp"
#include "dci/dihedral.hpp"
#include "dci/group.hpp"
#include "dci/instance.hpp"
#include "dci/pipeline.hpp"
#include "dci/scan.hpp"
#include "dci/selftest.hpp"

using nlohmann::json;
using namespace dci;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kInconclusive = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t degree_cap() {
  if (const char* v = std::getenv("DCI_DEGREE_CAP")) return std::stoul(v);
  return kDefaultDegreeCap;
}

std::optional<PiFamily> family_option(const std::string& name) {
  if (name == "mixed") return std::nullopt;
  auto f = parse_pi_family(name);
  if (!f) throw UsageError("unknown family: " + name);
  return f;
}

std::string big(const BigInt& v) { return v.str(); }

void render_text(const json& j, const std::string& path, std::ostream& os) {
  auto scalar_list = [](const json& a) {
    for (const auto& e : a)
      if (e.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, path.empty() ? k : path + "." + k, os);
  } else if (j.is_array() && !scalar_list(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], path + "[" + std::to_string(i) + "]", os);
  } else if (j.is_array()) {
    os << path << ":";
    for (const auto& e : j) os << " " << (e.is_string() ? e.get<std::string>() : e.dump());
    os << "\n";
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const json& report, const std::string& format) {
  if (format == "json")
    std::cout << report.dump(2) << "\n";
  else
    render_text(report, "", std::cout);
}

json cmd_closure(const std::string& file) {
  const auto g = GeneratedGroup::parse(read_input(file));
  const auto c = two_closure(g);
  json gens = json::array();
  for (const auto& f : c.generators()) gens.push_back(f.to_string());
  return {{"degree", g.degree()},
          {"order", big(g.order())},
          {"closure_order", big(c.order())},
          {"closed", g.order() == c.order()},
          {"closure_generators", gens}};
}

json cmd_blocks(const std::string& file) {
  const auto g = GeneratedGroup::parse(read_input(file));
  json systems = json::array();
  for (const auto& p : minimal_block_systems(g)) systems.push_back(p.to_json());
  return {{"degree", g.degree()}, {"transitive", is_transitive(g)}, {"minimal_block_systems", systems}};
}

ConjugationInstance load_instance(const std::string& file, const std::vector<std::uint64_t>& primes,
                                  std::optional<std::uint64_t> seed, std::size_t sample, const std::string& family) {
  if (!file.empty()) {
    const auto j = json::parse(read_input(file));
    return make_instance(RegularRep::from_json(j.at("r")), RegularRep::from_json(j.at("rp")));
  }
  if (!seed) throw UsageError("equiv needs an instance file or --seed");
  const auto r = regular_dihedral(primes, degree_cap());
  return make_instance(r, r.conjugate(sample_pi(r, family_option(family), *seed, sample)));
}

json cmd_equiv(const ConjugationInstance& inst) {
  const auto& g = inst.group();
  json out{{"instance", inst.to_json()}};
  out["X"] = equiv_b_partition(g, inst.level(1), inst.rho(1)).to_json();
  out["K"] = stabilizer_class_partition(g, inst.level(1)).to_json();
  out["Y"] = nullptr;
  out["L"] = nullptr;
  if (inst.s() >= 2) {
    const auto c = orbit_partition(GeneratedGroup(g.degree(), {inst.rho(2)}));
    if (is_invariant(g, c)) {
      out["Y"] = equiv_b_partition(g, c, inst.rho(2)).to_json();
      out["L"] = stabilizer_class_partition(g, c).to_json();
    }
  }
  return out;
}

std::pair<json, Exit> cmd_babai(const std::vector<std::uint64_t>& primes, std::uint64_t seed, std::size_t samples,
                                const std::string& family, std::size_t jobs) {
  const auto r = regular_dihedral(primes, degree_cap());
  ConjugatorOptions opts;
  opts.jobs = jobs;
  json rows = json::array();
  bool ok = true;
  for (std::size_t k = 0; k < samples; ++k) {
    const auto rp = r.conjugate(sample_pi(r, family_option(family), seed, k));
    const auto res = babai_ci_check(r, rp, opts);
    const bool found = res.delta && conjugates_into(*res.delta, rp, r);
    ok = ok && found;
    rows.push_back({{"sample", k},
                    {"found", found},
                    {"group_order", big(res.group_order)},
                    {"closure_order", big(res.closure_order)},
                    {"delta", res.delta ? json(res.delta->to_string()) : json(nullptr)}});
  }
  return {{{"primes", primes}, {"seed", seed}, {"family", family}, {"samples", rows}, {"ok", ok}},
          ok ? kOk : kFailure};
}

std::pair<json, Exit> cmd_scan(const std::string& group, const std::string& mode, std::uint32_t colours,
                               std::size_t samples, std::optional<std::uint64_t> seed) {
  const auto m = parse_scan_mode(mode);
  if (!m) throw UsageError("unknown mode: " + mode);
  ScanOptions opts;
  opts.mode = *m;
  opts.colours = colours;
  opts.samples = samples;
  opts.seed = seed;
  const auto v = dci_scan(parse_group_name(group), opts);
  auto j = v.to_json();
  j["group"] = group;
  j["mode"] = to_string(*m);
  using K = ScanVerdict::Kind;
  const Exit code = v.kind == K::confirmed ? kOk : v.kind == K::counterexample ? kFailure : kInconclusive;
  return {j, code};
}

std::pair<json, Exit> cmd_pipeline(const std::vector<std::uint64_t>& primes, std::uint64_t seed, std::size_t samples,
                                   const std::string& family, std::size_t jobs, bool pairwise) {
  const auto r = regular_dihedral(primes, degree_cap());
  PipelineOptions opts;
  opts.generic.jobs = jobs;
  opts.pairwise_audit = pairwise;
  ChainSearchOptions chain_opts;
  chain_opts.seed = seed;
  json rows = json::array();
  bool ok = true, exhausted = false;
  json paths = json::object();
  for (std::size_t k = 0; k < samples; ++k) {
    const auto rp = r.conjugate(sample_pi(r, family_option(family), seed, k));
    json row;
    try {
      const auto run = run_pipeline(r, rp, opts, chain_opts);
      row = run.to_json();
      const bool good = run.result.ok && run.audit_original;
      ok = ok && good;
      paths[run.result.path] = paths.value(run.result.path, 0) + 1;
    } catch (const ChainSearchExhausted& e) {
      exhausted = true;
      row = {{"error", e.what()}};
    }
    row["sample"] = k;
    rows.push_back(row);
  }
  const Exit code = !ok ? kFailure : exhausted ? kInconclusive : kOk;
  return {{{"primes", primes},
           {"seed", seed},
           {"family", family},
           {"paths", paths},
           {"samples", rows},
           {"ok", ok && !exhausted}},
          code};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dihedral CI verification toolkit"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Report rendering")->check(CLI::IsMember({"text", "json"}));

  std::string file;
  std::vector<std::uint64_t> primes{3, 5};
  std::optional<std::uint64_t> seed;
  std::size_t samples = 1, jobs = 1, sample = 0, instances = 50;
  std::string family = "mixed", group, mode = "digraph";
  std::uint32_t colours = 2;
  bool pairwise = false;
  std::vector<std::string> suites;

  auto add_primes = [&](CLI::App* c) { c->add_option("--primes", primes, "Distinct odd primes")->delimiter(','); };

  auto* closure = app.add_subcommand("closure", "2-closure of a group file");
  closure->add_option("file", file, "Group file, or - for standard input")->required();

  auto* blocks = app.add_subcommand("blocks", "Minimal block systems of a group file");
  blocks->add_option("file", file, "Group file, or - for standard input")->required();

  auto* equiv = app.add_subcommand("equiv", "Invariant partitions X, Y, K, L of an instance");
  equiv->add_option("file", file, "Instance JSON {\"r\": spec, \"rp\": spec}, or - for standard input");
  add_primes(equiv);
  equiv->add_option("--seed", seed, "Seed for a generated instance");
  equiv->add_option("--sample", sample, "Sample index within the seeded stream");
  equiv->add_option("--family", family, "Family of pi, or mixed");

  auto* babai = app.add_subcommand("babai", "Conjugator search in the 2-closure on seeded samples");
  add_primes(babai);
  babai->add_option("--seed", seed, "Seed")->required();
  babai->add_option("--samples", samples, "Number of samples");
  babai->add_option("--family", family, "Family of pi, or mixed");
  babai->add_option("--jobs", jobs, "Worker threads for candidate scans");

  auto* scan = app.add_subcommand("dci-scan", "Classify Cayley objects of a small group");
  scan->add_option("--group", group, "zN or dN")->required();
  scan->add_option("--mode", mode, "digraph, graph or colour");
  scan->add_option("--colours,--colors", colours, "Colours for colour mode");
  scan->add_option("--samples", samples, "Connection sets to sample for large groups");
  scan->add_option("--seed", seed, "Seed, required when sampling");

  auto* pipe = app.add_subcommand("pipeline", "Conjugation pipeline on seeded samples");
  add_primes(pipe);
  pipe->add_option("--seed", seed, "Seed")->required();
  pipe->add_option("--samples", samples, "Number of samples");
  pipe->add_option("--family", family, "Family of pi, or mixed");
  pipe->add_option("--jobs", jobs, "Worker threads for candidate scans");
  pipe->add_flag("--pairwise-audit", pairwise, "Audit every conjugator pair by pair as well");

  auto* self = app.add_subcommand("selftest", "Property suites on seeded instances");
  add_primes(self);
  self->add_option("--seed", seed, "Seed (default 1)");
  self->add_option("--instances", instances, "Instances per suite");
  self->add_option("--family", family, "Family of pi, or mixed");
  self->add_option("--suite", suites, "Run only these suites")->check(CLI::IsMember(suite_names()));

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    json report;
    Exit code = kOk;
    if (*closure) {
      report = cmd_closure(file);
    } else if (*blocks) {
      report = cmd_blocks(file);
    } else if (*equiv) {
      report = cmd_equiv(load_instance(file, primes, seed, sample, family));
    } else if (*babai) {
      std::tie(report, code) = cmd_babai(primes, *seed, samples, family, jobs);
    } else if (*scan) {
      std::tie(report, code) = cmd_scan(group, mode, colours, samples, seed);
    } else if (*pipe) {
      std::tie(report, code) = cmd_pipeline(primes, *seed, samples, family, jobs, pairwise);
    } else if (*self) {
      SelftestOptions opts;
      opts.primes = primes;
      opts.instances = instances;
      opts.seed = seed.value_or(1);
      opts.family = family_option(family);
      report = run_selftest(opts, suites);
      code = report.at("ok").get<bool>() ? kOk : kFailure;
    }
    emit(report, format);
    return code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ChainSearchExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailure;
  }
}

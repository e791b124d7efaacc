// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance <path to bettitest executable>

#include <openssl/evp.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bettitest/baselines.hpp"
#include "bettitest/complex.hpp"
#include "bettitest/homology.hpp"
#include "bettitest/samplers.hpp"
#include "bettitest/stats.hpp"
#include "oracles.hpp"

using namespace bettitest;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<oracle::Verts> as_lists(const SimplicialComplex& sc) {
  std::vector<oracle::Verts> out;
  for (std::size_t p = 0; p <= sc.max_dim(); ++p)
    for (std::size_t i = 0; i < sc.count(p); ++i) {
      auto s = sc.simplex(p, i);
      out.emplace_back(s.begin(), s.end());
    }
  return out;
}

bool subset_of(const SimplicialComplex& a, const SimplicialComplex& b) {
  for (std::size_t p = 0; p <= a.max_dim(); ++p)
    for (std::size_t i = 0; i < a.count(p); ++i)
      if (!b.contains(a.simplex(p, i))) return false;
  return true;
}

Sampler from_preset(const std::string& name) {
  const auto spec = preset(name);
  return [spec](std::size_t n, std::uint64_t seed) { return sample(spec, n, seed); };
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Complexes generated for criteria 1 and 4; criterion 2 checks all of them.
std::vector<SimplicialComplex> g_suite;

Outcome homology_oracle() {
  Rng rng(1001);
  std::size_t agree = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + rng.below(3);
    const auto pc = oracle::random_cloud(rng, 1 + rng.below(12), d);
    const auto sc = build_rips(pairwise_distances(pc), 0.5 * rng.uniform(), d);
    agree += betti_numbers(sc, sc.max_dim() + 1) == oracle::dense_betti(as_lists(sc), sc.max_dim() + 1);
    g_suite.push_back(sc);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {agree == 500 && secs < 10.0, std::to_string(agree) + "/500 exact matches in " + fmt(secs) + " s"};
}

Outcome nesting_chain() {
  Rng rng(1004);
  std::size_t ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.below(3);
    const auto pc = oracle::random_cloud(rng, 1 + rng.below(12), d);
    const double r = 0.35 * rng.uniform();
    const auto cech = build_cech(pc, r, d);
    const auto rips = build_rips(pairwise_distances(pc), r, d);
    const auto cech2 = build_cech(pc, 2 * r, d);
    ok += subset_of(cech, rips) && subset_of(rips, cech2);
    g_suite.push_back(cech);
    g_suite.push_back(rips);
    g_suite.push_back(cech2);
  }
  return {ok == 200, std::to_string(ok) + "/200 clouds satisfy C(r) in R(r) in C(2r)"};
}

Outcome algebraic_invariants() {
  std::size_t bad_boundary = 0, bad_euler = 0;
  for (const auto& sc : g_suite) {
    for (std::size_t p = 1; p < sc.max_dim(); ++p)
      bad_boundary += !multiply(boundary_matrix(sc, p), boundary_matrix(sc, p + 1)).is_zero();
    const auto betti = betti_numbers(sc, sc.max_dim() + 1);
    std::int64_t chi_counts = 0, chi_betti = 0;
    for (std::size_t p = 0; p <= sc.max_dim(); ++p) {
      const std::int64_t sign = p % 2 == 0 ? 1 : -1;
      chi_counts += sign * static_cast<std::int64_t>(sc.count(p));
      chi_betti += sign * betti[p];
    }
    bad_euler += chi_counts != chi_betti;
  }
  return {bad_boundary == 0 && bad_euler == 0,
          std::to_string(g_suite.size()) + " complexes, " + std::to_string(bad_boundary) +
              " nonzero boundary products, " + std::to_string(bad_euler) + " Euler mismatches"};
}

Outcome known_spaces() {
  struct Space {
    const char* preset;
    BettiVector expected;
  };
  const std::vector<Space> spaces{{"circle", {1, 1}}, {"unit_disk", {1, 0}}, {"sphere", {1, 0, 1}}, {"torus", {1, 2, 1}}};
  bool pass = true;
  std::string detail;
  for (const auto& s : spaces) {
    const auto spec = preset(s.preset);
    const ThresholdRule rule{Regime::supercritical, spec.ambient_dim()};
    std::size_t hits = 0;
    std::string seen;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto b = estimate_betti(sample(spec, 400, seed), rule, ScalingMode::none);
      hits += b == s.expected;
      if (seed < 3) {
        seen += "(";
        for (std::size_t i = 0; i < b.size(); ++i) seen += (i ? "," : "") + std::to_string(b[i]);
        seen += ")";
      }
    }
    pass = pass && hits >= 8;
    detail += std::string(detail.empty() ? "" : "; ") + s.preset + " " + std::to_string(hits) + "/10 e.g. " + seen;
  }
  return {pass, detail};
}

Outcome size_control() {
  const auto start = std::chrono::steady_clock::now();
  const auto sampler = from_preset("sphere_vmf_mixture");
  const ThresholdRule rule{Regime::critical, 3};
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    worst = std::max(worst, two_sample_power(sampler, sampler, rule, 0.05, 100, 100, seed).power);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 0.15 && secs < 300,
          "max self-vs-self power " + fmt(worst) + " over 20 seeds (sphere_vmf_mixture, n = 100) in " + fmt(secs) +
              " s"};
}

Outcome consistency_trend() {
  struct Scenario {
    const char* name;
    const char* null;
    const char* alt;
    Regime regime;
    BettiVector hyp;
  };
  const std::vector<Scenario> scenarios{{"circle vs bivariate normal", "circle_vm_mixture", "bivariate_normal",
                                         Regime::critical, {1, 1}},
                                        {"disk vs square", "unit_disk", "unit_square", Regime::supercritical, {1, 0}}};
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (const auto& s : scenarios) {
    const ThresholdRule rule{s.regime, 2};
    const auto small = one_sample_power(from_preset(s.null), from_preset(s.alt), s.hyp, rule, 0.05, 100, 20, 11);
    const auto large = one_sample_power(from_preset(s.null), from_preset(s.alt), s.hyp, rule, 0.05, 100, 200, 11);
    pass = pass && large.power > small.power && large.power >= 0.8;
    detail += std::string(detail.empty() ? "" : "; ") + s.name + ": power " + fmt(small.power) + " at n = 20, " +
              fmt(large.power) + " at n = 200";
    for (auto mode : {ScalingMode::none, ScalingMode::max_norm}) {
      TestOptions opts;
      opts.scaling = mode;
      const auto a = one_sample_power(from_preset(s.null), from_preset(s.alt), s.hyp, rule, 0.05, 100, 20, 11, opts);
      const auto b = one_sample_power(from_preset(s.null), from_preset(s.alt), s.hyp, rule, 0.05, 100, 200, 11, opts);
      std::cout << "INFO criterion 6 diagnostic, scaling " << to_string(mode) << ", " << s.name << ": power "
                << a.power << " at n = 20, " << b.power << " at n = 200\n";
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {pass && secs < 900, detail + " (per_point_norm scaling, " + fmt(secs) + " s)"};
}

Outcome wasserstein_oracle() {
  std::mt19937_64 gen(1007);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  auto diagram = [&] {
    std::vector<PersistencePair> pairs;
    const std::size_t count = gen() % 7;
    for (std::size_t i = 0; i < count; ++i) {
      const double b = u(gen);
      pairs.push_back({1, b, b + u(gen) / 2});
    }
    return PersistenceDiagram(pairs);
  };
  std::size_t ok = 0;
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = diagram(), b = diagram();
    const double err = std::abs(wasserstein_distance(a, b, 1, 1, 1) - oracle::brute_wasserstein(a.pairs(), b.pairs(), 1));
    worst = std::max(worst, err);
    ok += err <= 1e-9;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 pairs within 1e-9, max error " + fmt(worst)};
}

Outcome landscape_triangle() {
  std::mt19937_64 gen(1008);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  const PersistenceDiagram d({{1, 0.0, 2.0}});
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> grid(1 + gen() % 1000);
    for (auto& t : grid) t = u(gen);
    std::sort(grid.begin(), grid.end());
    if (trial == 0) grid = linear_grid(0.0, 4.0, 1000);
    const auto f = landscape(d, 1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(f.values[i] - std::max(0.0, std::min(grid[i], 2.0 - grid[i]))));
  }
  return {worst == 0.0, "max abs error " + fmt(worst) + " over 100 grids"};
}

Outcome persistence_rank() {
  Rng rng(1009);
  std::size_t checks = 0, ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pc = oracle::random_cloud(rng, 2 + rng.below(11), 1 + rng.below(3));
    const auto dm = pairwise_distances(pc);
    const auto fc = build_rips_filtration(dm, 1.0, 3);
    const auto explicit_dgm = reduce_filtration(fc);
    const auto implicit_dgm = rips_persistence(dm, 1.0, 2);
    for (int k = 0; k < 5; ++k) {
      const double t = rng.uniform() < 0.5 ? fc[rng.below(fc.size())].value : rng.uniform();
      const auto betti = betti_numbers(fc.prefix(t), 3);
      bool all = true;
      for (std::size_t p = 0; p < 3; ++p) {
        all = all && persistent_betti(explicit_dgm, p, t, t) == static_cast<std::size_t>(betti[p]);
        all = all && persistent_betti(implicit_dgm, p, t, t) == static_cast<std::size_t>(betti[p]);
      }
      ++checks;
      ok += all;
    }
  }
  return {ok == checks, std::to_string(ok) + "/" + std::to_string(checks) +
                            " (filtration, t) checks agree for both reduction paths"};
}

Outcome disconnection_probe() {
  const std::vector<std::size_t> ns{100, 200, 400};
  const auto rows = check_disconnection(from_preset("unit_square"), {Regime::supercritical, 2}, ns, 50, 1010);
  bool pass = true;
  std::string detail = "supercritical fractions:";
  for (const auto& r : rows) {
    pass = pass && r.fraction > 0.0;
    detail += " n=" + std::to_string(r.n) + " " + fmt(r.fraction);
  }
  const auto critical = check_disconnection(from_preset("unit_square"), {Regime::critical, 2}, ns, 50, 1010);
  std::cout << "INFO criterion 10 diagnostic, critical rule fractions:";
  for (const auto& r : critical) std::cout << " n=" << r.n << " " << r.fraction;
  std::cout << '\n';
  return {pass, detail};
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

Outcome determinism(const std::string& exe) {
  const fs::path dir = fs::temp_directory_path() / ("bettitest_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
  };
  write("power.json", R"({"schema": 1, "scenario": "det", "test": "one_sample",
    "null": {"preset": "circle_vm_mixture"}, "alt": {"preset": "bivariate_normal"},
    "hypothesis": [1, 1], "r": 20, "n_list": [20, 50], "seed": 5})");
  write("two.json", R"({"schema": 1, "scenario": "det2", "test": "two_sample",
    "null": {"preset": "torus"}, "alt": {"preset": "sphere"}, "regime": "supercritical",
    "r": 10, "n_list": [30], "seed": 6, "baseline": {"n_permutations": 5, "r": 2}})");
  write("a2.json", R"({"schema": 1, "null": {"preset": "unit_square"}, "regime": "supercritical",
    "n_list": [50, 100], "reps": 10, "seed": 7})");

  const std::string q = "\"";
  const std::string d = dir.string() + "/";
  // Each command writes {out}; run twice with different thread counts.
  const std::vector<std::pair<std::string, std::string>> commands{
      {"sample.csv", "sample --dist torus -n 200 --seed 9 -o {out}"},
      {"betti.json", "betti " + q + d + "sample.csv" + q + " --regime supercritical --scale none --json {out}"},
      {"one.json", "test-one --input " + q + d + "sample.csv" + q +
                       " --null torus --hyp 1,2,1 --regime supercritical --scale none --r 20 --seed 3 -o {out}"},
      {"two.json", "test-two --x " + q + d + "sample.csv" + q + " --y " + q + d + "sample.csv" + q +
                       " --null torus --r 20 --seed 4 -o {out}"},
      {"power.csv", "power " + q + d + "power.json" + q + " -o {out} --plot " + q + d + "power.svg" + q},
      {"power2.csv", "power " + q + d + "two.json" + q + " -o {out}"},
      {"baselines.csv", "baselines " + q + d + "two.json" + q + " -o {out}"},
      {"a2.csv", "check-a2 " + q + d + "a2.json" + q + " -o {out}"},
  };
  std::size_t identical = 0, failures = 0;
  std::string detail;
  for (const auto& [file, args] : commands) {
    std::string hashes[2];
    for (int run = 0; run < 2; ++run) {
      const std::string out = d + "run" + std::to_string(run) + "_" + file;
      std::string a = args;
      a.replace(a.find("{out}"), 5, q + out + q);
      const std::string cmd = q + exe + q + " --threads " + std::to_string(run + 1) + " " + a + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        ++failures;
        detail += " [" + file + " command failed]";
      }
      hashes[run] = sha256_file(out);
      // Later commands read the first run's sample.
      if (file == "sample.csv" && run == 0) fs::copy_file(out, d + "sample.csv", fs::copy_options::overwrite_existing);
    }
    if (hashes[0] == hashes[1]) ++identical;
    else detail += " [" + file + " differs]";
  }
  fs::remove_all(dir);
  return {failures == 0 && identical == commands.size(),
          std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " command outputs have identical SHA-256 across runs" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <bettitest executable>\n";
    return 2;
  }
  const std::string exe = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"homology oracle equivalence", homology_oracle},
      {"nesting chain", nesting_chain},
      {"algebraic invariants", algebraic_invariants},
      {"known-space Betti vectors", known_spaces},
      {"size control", size_control},
      {"consistency trend", consistency_trend},
      {"Wasserstein oracle", wasserstein_oracle},
      {"landscape triangle", landscape_triangle},
      {"persistence/rank consistency", persistence_rank},
      {"disconnection probe", disconnection_probe},
      {"determinism", [&] { return determinism(exe); }},
  };
  // Criterion numbers in the order they are listed, not the order they run:
  // the invariants check (2) reuses complexes from 1 and 4.
  const std::vector<int> numbers{1, 4, 2, 3, 5, 6, 7, 8, 9, 10, 11};
  std::vector<std::string> lines(12);
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    lines[numbers[i]] = std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(numbers[i]) + " (" +
                        criteria[i].first + "): " + o.detail;
    std::cout << lines[numbers[i]] << std::endl;
  }
  std::cout << "\nSummary\n";
  for (int k = 1; k <= 11; ++k) std::cout << lines[k] << '\n';
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}

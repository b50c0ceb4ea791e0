// Copyright 2026 The sampled-hr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sampled-hr: command-line front end.
//
// Exit codes: 0 success, 1 computation or data error, 2 usage or
// configuration error.

#include <openssl/evp.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sampled_hr/sampled_hr.hpp"

namespace {

using namespace sampled_hr;
using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw ComputationError("SHA-256 initialisation failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

// Provenance written at the head of every output. Output path and thread
// count are left out: neither changes the result.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256

  void add_flag(std::string name, std::string value) {
    flags.emplace_back(std::move(name), std::move(value));
  }
  void add_input(const std::string& path) { inputs.emplace_back(path, sha256_file(path)); }

  void write_comment(std::ostream& out) const {
    out << "# sampled-hr " << kVersion << '\n';
    out << "# command: " << command << '\n';
    out << "# flags:";
    for (const auto& [name, value] : flags) out << " --" << name << '=' << value;
    out << '\n';
    if (seed) out << "# seed: " << *seed << '\n';
    for (const auto& [path, digest] : inputs) {
      out << "# input: " << path << " sha256=" << digest << '\n';
    }
  }

  ordered_json to_json() const {
    ordered_json j;
    j["tool"] = "sampled-hr";
    j["version"] = kVersion;
    j["command"] = command;
    ordered_json f = ordered_json::object();
    for (const auto& [name, value] : flags) f[name] = value;
    j["flags"] = std::move(f);
    j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    auto in = ordered_json::array();
    for (const auto& [path, digest] : inputs) {
      in.push_back({{"path", path}, {"sha256", digest}});
    }
    j["inputs"] = std::move(in);
    return j;
  }
};

// Writes to --out when given, else standard output.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct CatalogFlags {
  std::optional<long long> N;
  std::string sidecar;

  void attach(CLI::App* cmd) {
    cmd->add_option("--N", N, "Catalog size N");
    cmd->add_option("--catalog", sidecar, "JSON sidecar {\"N\": <int>}");
  }

  Count resolve() const {
    if (N) {
      if (*N < 2) throw DomainError("catalog size N must be >= 2");
      return static_cast<Count>(*N);
    }
    if (!sidecar.empty()) return read_catalog_sidecar(sidecar);
    throw UsageError("catalog size required: pass --N or --catalog");
  }
};

CatalogSpec make_catalog(Count N, long long n) {
  if (n < 2) throw DomainError("sample size n must be >= 2");
  return CatalogSpec(N, static_cast<Count>(n));
}

SamplingScheme make_scheme(const std::string& name, const RankFile& file) {
  if (name == "binom") return SamplingScheme::with_replacement();
  if (name == "hyper") return SamplingScheme::without_replacement();
  if (name == "actual") {
    if (!file.effective_items) {
      throw ConfigError("--scheme actual needs a rank file with an effective_N column");
    }
    return SamplingScheme::irrelevant_only(*file.effective_items);
  }
  throw ConfigError("unknown scheme '" + name + "' (binom, hyper or actual)");
}

// ---- hr ---------------------------------------------------------------

struct HrOptions {
  std::string ranks;
  CatalogFlags catalog;
  std::string out;
};

int run_hr(const HrOptions& o) {
  const Count N = o.catalog.resolve();
  const auto file = read_rank_file(o.ranks, N);
  RunManifest manifest{"hr", {}, std::nullopt, {}};
  manifest.add_flag("N", std::to_string(N));
  manifest.add_input(o.ranks);
  Output out(o.out);
  manifest.write_comment(out.stream());
  write_curve_csv(out.stream(), hr_curve(file.profile));
  return 0;
}

// ---- shr / eshr -------------------------------------------------------

struct ShrOptions {
  std::string ranks;
  CatalogFlags catalog;
  long long n = 0;
  std::string scheme = "binom";
  std::uint64_t seed = 0;
  long long runs = 1;
  unsigned threads = 0;
  std::string out;
};

int run_shr(const ShrOptions& o) {
  const Count N = o.catalog.resolve();
  const auto catalog = make_catalog(N, o.n);
  if (o.runs < 1) throw DomainError("--runs must be >= 1");
  const auto file = read_rank_file(o.ranks, N);
  const auto scheme = make_scheme(o.scheme, file);
  const MonteCarloConfig cfg{o.seed, static_cast<Count>(o.runs), o.threads};
  const auto result = shr_curve_monte_carlo(file.profile, scheme, catalog, cfg);

  RunManifest manifest{"shr", {}, o.seed, {}};
  manifest.add_flag("N", std::to_string(N));
  manifest.add_flag("n", std::to_string(o.n));
  manifest.add_flag("scheme", o.scheme);
  manifest.add_flag("runs", std::to_string(o.runs));
  manifest.add_input(o.ranks);
  Output out(o.out);
  manifest.write_comment(out.stream());
  if (cfg.runs > 1) {
    write_curve_csv(out.stream(), result.mean, result.std_error);
  } else {
    write_curve_csv(out.stream(), result.mean);
  }
  return 0;
}

struct EshrOptions {
  std::string ranks;
  CatalogFlags catalog;
  long long n = 0;
  std::string scheme = "binom";
  std::string out;
};

int run_eshr(const EshrOptions& o) {
  const Count N = o.catalog.resolve();
  const auto catalog = make_catalog(N, o.n);
  const auto file = read_rank_file(o.ranks, N);
  const auto scheme = make_scheme(o.scheme, file);
  const auto curve = expected_shr_curve(histogram(file.profile), scheme, catalog);
  RunManifest manifest{"eshr", {}, std::nullopt, {}};
  manifest.add_flag("N", std::to_string(N));
  manifest.add_flag("n", std::to_string(o.n));
  manifest.add_flag("scheme", o.scheme);
  manifest.add_input(o.ranks);
  Output out(o.out);
  manifest.write_comment(out.stream());
  write_curve_csv(out.stream(), curve);
  return 0;
}

// ---- map --------------------------------------------------------------

struct MapOptions {
  std::string family;
  std::optional<double> a;
  CatalogFlags catalog;
  long long n = 0;
  std::string out;
};

int run_map(const MapOptions& o) {
  const Count N = o.catalog.resolve();
  const auto catalog = make_catalog(N, o.n);
  std::string label = o.family;
  if (label == "beta") {
    if (!o.a) throw UsageError("--f beta needs --a");
    if (!(*o.a > 0.0)) throw DomainError("Beta shape a must be > 0");
    label = "beta@" + format_double(*o.a);
  }
  const auto spec = MappingSpec::parse(label);
  if (spec.kind == MapKind::BetaFitted) {
    throw UsageError("beta@P is fitted from data; use the fit command");
  }
  const auto table = make_table(spec, catalog);
  RunManifest manifest{"map", {}, std::nullopt, {}};
  manifest.add_flag("f", label);
  manifest.add_flag("N", std::to_string(N));
  manifest.add_flag("n", std::to_string(o.n));
  Output out(o.out);
  manifest.write_comment(out.stream());
  write_mapping_csv(out.stream(), table);
  return 0;
}

// ---- fit --------------------------------------------------------------

struct FitOptions {
  std::string sampled;
  CatalogFlags catalog;
  long long n = 0;
  double init = 0.5;
  double tol = 1e-6;
  long long max_iter = 100;
  std::string out;
};

SampledRankRecord read_sampled(const std::string& path, Count n) {
  const auto file = read_rank_file(path, n);
  const auto ranks = file.profile.ranks();
  return SampledRankRecord({ranks.begin(), ranks.end()}, n);
}

int run_fit(const FitOptions& o) {
  const Count N = o.catalog.resolve();
  const auto catalog = make_catalog(N, o.n);
  if (o.max_iter < 1) throw DomainError("--max-iter must be >= 1");
  const auto sampled = read_sampled(o.sampled, catalog.sample_size());
  const FitConfig cfg{o.init, o.tol, static_cast<Count>(o.max_iter)};

  RunManifest manifest{"fit", {}, std::nullopt, {}};
  manifest.add_flag("N", std::to_string(N));
  manifest.add_flag("n", std::to_string(o.n));
  manifest.add_flag("init", format_double(o.init));
  manifest.add_flag("tol", format_double(o.tol));
  manifest.add_flag("max-iter", std::to_string(o.max_iter));
  manifest.add_input(o.sampled);

  ordered_json doc;
  doc["manifest"] = manifest.to_json();
  try {
    doc["fit"] = to_json(fit_beta_param(sampled, catalog, cfg));
  } catch (const FitError& e) {
    std::cerr << "sampled-hr: " << e.what() << '\n'
              << "trace: " << to_json(e.trace()).dump() << '\n';
    return 1;
  }
  Output out(o.out);
  out.stream() << doc.dump(2) << '\n';
  return 0;
}

// ---- compare ----------------------------------------------------------

struct CompareOptions {
  std::vector<std::string> ranks;
  std::vector<std::string> labels;
  CatalogFlags catalog;
  long long n = 0;
  std::vector<long long> ks{1, 2, 5, 10, 20, 50};
  std::vector<std::string> maps{"bound", "beta@0.5"};
  std::string scheme = "binom";
  std::uint64_t seed = 0;
  long long runs = 1;
  bool exact = false;
  unsigned threads = 0;
  std::string out;
};

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ",") + item;
  return s;
}

int run_compare(const CompareOptions& o) {
  const Count N = o.catalog.resolve();
  const auto catalog = make_catalog(N, o.n);
  if (o.runs < 1) throw DomainError("--runs must be >= 1");
  std::vector<std::string> labels = o.labels;
  if (labels.empty()) {
    for (const auto& p : o.ranks) labels.push_back(std::filesystem::path(p).stem().string());
  } else if (labels.size() != o.ranks.size()) {
    throw ConfigError("--labels count must match --ranks count");
  }
  std::vector<Count> ks;
  for (long long k : o.ks) {
    if (k < 1 || k > static_cast<long long>(catalog.sample_size())) {
      throw DomainError("cutoff " + std::to_string(k) + " outside [1, n]");
    }
    ks.push_back(static_cast<Count>(k));
  }
  std::vector<MappingSpec> specs;
  for (const auto& m : o.maps) specs.push_back(MappingSpec::parse(m));
  {
    std::set<std::string> unique(labels.begin(), labels.end());
    if (unique.size() != labels.size()) throw ConfigError("duplicate algorithm labels");
  }

  RunManifest manifest{"compare", {}, o.seed, {}};
  manifest.add_flag("N", std::to_string(N));
  manifest.add_flag("n", std::to_string(o.n));
  manifest.add_flag("labels", join(labels));
  std::vector<std::string> k_text;
  for (Count k : ks) k_text.push_back(std::to_string(k));
  manifest.add_flag("k", join(k_text));
  manifest.add_flag("f", join(o.maps));
  manifest.add_flag("scheme", o.scheme);
  manifest.add_flag("runs", std::to_string(o.runs));
  manifest.add_flag("exact", o.exact ? "true" : "false");

  std::vector<AlgorithmCurves> curves;
  std::vector<SampledRankRecord> first_runs;
  for (std::size_t i = 0; i < o.ranks.size(); ++i) {
    manifest.add_input(o.ranks[i]);
    const auto file = read_rank_file(o.ranks[i], N);
    const auto scheme = make_scheme(o.scheme, file);
    HitRatioCurve sampled;
    if (o.exact) {
      sampled = expected_shr_curve(histogram(file.profile), scheme, catalog);
    } else {
      const MonteCarloConfig cfg{o.seed, static_cast<Count>(o.runs), o.threads};
      sampled = shr_curve_monte_carlo(file.profile, scheme, catalog, cfg).mean;
    }
    curves.push_back({labels[i], hr_curve(file.profile), std::move(sampled)});
    first_runs.push_back(
        sample_ranks(file.profile, scheme, catalog, o.seed, 0, o.threads));
  }

  ordered_json doc;
  doc["manifest"] = manifest.to_json();
  doc["catalog"] = {{"N", N}, {"n", catalog.sample_size()}};
  doc["sampled_source"] = o.exact ? "exact" : "monte_carlo";
  ordered_json winners = ordered_json::object();
  ordered_json errors = ordered_json::object();
  ordered_json fitted = ordered_json::object();
  for (const auto& label : labels) errors[label] = ordered_json::object();

  for (std::size_t m = 0; m < specs.size(); ++m) {
    std::vector<LabeledTable> tables;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (specs[m].kind == MapKind::BetaFitted) {
        const auto trace = fit_beta_param(first_runs[i], catalog, *specs[m].fit);
        fitted[labels[i]] = to_json(trace);
        tables.push_back({labels[i], beta_map_table(trace.final_a, catalog)});
      } else {
        tables.push_back({labels[i], make_table(specs[m], catalog)});
      }
      errors[labels[i]][o.maps[m]] =
          to_json(error_report(curves[i].global, curves[i].sampled, tables.back().table));
    }
    winners[o.maps[m]] = to_json(winner_table(curves, tables, ks));
  }
  doc["winner_tables"] = std::move(winners);
  doc["error_reports"] = std::move(errors);
  if (!fitted.empty()) doc["fitted"] = std::move(fitted);

  Output out(o.out);
  out.stream() << doc.dump(2) << '\n';
  return 0;
}

// ---- simulate ---------------------------------------------------------

struct SimulateOptions {
  double a = 0.0;
  long long M = 0;
  long long N = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_simulate(const SimulateOptions& o) {
  if (o.M < 1) throw DomainError("--M must be >= 1");
  if (o.N < 2) throw DomainError("--N must be >= 2");
  const auto profile =
      simulate_profile(o.a, static_cast<Count>(o.M), static_cast<Count>(o.N), o.seed);
  RunManifest manifest{"simulate", {}, o.seed, {}};
  manifest.add_flag("a", format_double(o.a));
  manifest.add_flag("M", std::to_string(o.M));
  manifest.add_flag("N", std::to_string(o.N));
  Output out(o.out);
  manifest.write_comment(out.stream());
  write_rank_file(out.stream(), profile);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global and sampled top-K Hit-Ratio curves and their alignment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  HrOptions hr;
  auto* hr_cmd = app.add_subcommand("hr", "Global HR@K curve for K = 1..N");
  hr_cmd->add_option("--ranks", hr.ranks, "Rank file (user_id,rank)")->required();
  hr.catalog.attach(hr_cmd);
  hr_cmd->add_option("--out", hr.out, "Output CSV (default: stdout)");

  ShrOptions shr;
  auto* shr_cmd = app.add_subcommand("shr", "Monte Carlo SHR@k curve for k = 1..n");
  shr_cmd->add_option("--ranks", shr.ranks, "Rank file")->required();
  shr.catalog.attach(shr_cmd);
  shr_cmd->add_option("--n", shr.n, "Sample size n (including the target)")->required();
  shr_cmd->add_option("--scheme", shr.scheme, "binom | hyper | actual")
      ->check(CLI::IsMember({"binom", "hyper", "actual"}));
  shr_cmd->add_option("--seed", shr.seed, "Master seed");
  shr_cmd->add_option("--runs", shr.runs, "Independent sampling runs");
  shr_cmd->add_option("--threads", shr.threads, "Worker threads (0 = auto)");
  shr_cmd->add_option("--out", shr.out, "Output CSV (default: stdout)");

  EshrOptions eshr;
  auto* eshr_cmd = app.add_subcommand("eshr", "Exact E[SHR@k] curve for k = 1..n");
  eshr_cmd->add_option("--ranks", eshr.ranks, "Rank file")->required();
  eshr.catalog.attach(eshr_cmd);
  eshr_cmd->add_option("--n", eshr.n, "Sample size n")->required();
  eshr_cmd->add_option("--scheme", eshr.scheme, "binom | hyper")
      ->check(CLI::IsMember({"binom", "hyper", "actual"}));
  eshr_cmd->add_option("--out", eshr.out, "Output CSV (default: stdout)");

  MapOptions map;
  auto* map_cmd = app.add_subcommand("map", "Mapping table f(k) for k = 1..n");
  map_cmd->add_option("--f", map.family, "linear | bound | uniform | beta | beta@<a>")
      ->required();
  map_cmd->add_option("--a", map.a, "Beta shape for --f beta");
  map.catalog.attach(map_cmd);
  map_cmd->add_option("--n", map.n, "Sample size n")->required();
  map_cmd->add_option("--out", map.out, "Output CSV (default: stdout)");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the Beta@P shape from sampled ranks");
  fit_cmd->add_option("--sampled-ranks", fit.sampled, "Sampled rank file (user_id,rank)")
      ->required();
  fit.catalog.attach(fit_cmd);
  fit_cmd->add_option("--n", fit.n, "Sample size n")->required();
  fit_cmd->add_option("--init", fit.init, "Initial shape a");
  fit_cmd->add_option("--tol", fit.tol, "Convergence threshold on |delta a|");
  fit_cmd->add_option("--max-iter", fit.max_iter, "Iteration cap");
  fit_cmd->add_option("--out", fit.out, "Output JSON (default: stdout)");

  CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Winner tables and mapping errors");
  cmp_cmd->add_option("--ranks", cmp.ranks, "One rank file per algorithm")->required();
  cmp_cmd->add_option("--labels", cmp.labels, "Algorithm labels (default: file stems)");
  cmp.catalog.attach(cmp_cmd);
  cmp_cmd->add_option("--n", cmp.n, "Sample size n")->required();
  cmp_cmd->add_option("--k", cmp.ks, "Cutoffs")->delimiter(',');
  cmp_cmd->add_option("--f", cmp.maps, "Mappings: linear, bound, uniform, beta@<a>, beta@P")
      ->delimiter(',');
  cmp_cmd->add_option("--scheme", cmp.scheme, "binom | hyper | actual")
      ->check(CLI::IsMember({"binom", "hyper", "actual"}));
  cmp_cmd->add_option("--seed", cmp.seed, "Master seed");
  cmp_cmd->add_option("--runs", cmp.runs, "Monte Carlo runs");
  cmp_cmd->add_flag("--exact", cmp.exact, "Use exact E[SHR@k] instead of Monte Carlo");
  cmp_cmd->add_option("--threads", cmp.threads, "Worker threads (0 = auto)");
  cmp_cmd->add_option("--out", cmp.out, "Output JSON (default: stdout)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Synthetic Beta(a, 1) rank file");
  sim_cmd->add_option("--a", sim.a, "Beta shape a")->required();
  sim_cmd->add_option("--M", sim.M, "User count")->required();
  sim_cmd->add_option("--N", sim.N, "Catalog size")->required();
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--out", sim.out, "Output rank file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*hr_cmd) return run_hr(hr);
    if (*shr_cmd) return run_shr(shr);
    if (*eshr_cmd) return run_eshr(eshr);
    if (*map_cmd) return run_map(map);
    if (*fit_cmd) return run_fit(fit);
    if (*cmp_cmd) return run_compare(cmp);
    if (*sim_cmd) return run_simulate(sim);
  } catch (const sampled_hr::ConfigError& e) {
    std::cerr << "sampled-hr: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sampled-hr: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

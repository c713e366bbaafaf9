#include "cli.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chaoslab/errors.hpp"
#include "chaoslab/independence.hpp"
#include "chaoslab/kernel_io.hpp"
#include "chaoslab/montecarlo.hpp"
#include "chaoslab/sequences.hpp"

namespace chaoslab::cli {

namespace {

constexpr const char* kFileFormats = R"(File formats (JSON):
  kernel    { "dimension": N, "order": q,
              "entries": [ { "index": [i1, ..., iq], "value": c }, ... ] }
            indices 1-based and sorted ascending, one entry per index set;
            the value is the coefficient at every ordering of the index.
  manifest  { "groups": [ { "order": q,
                            "elements": [ "kernel.json" | {kernel}, ... ] }, ... ] }
            paths are relative to the manifest; kernels are rescaled to unit
            variance with a warning when the factor differs from 1.

Exit codes: 0 pass, 1 criterion fail, 2 usage or input error.)";

struct Common {
  std::string out_path;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  std::size_t block_size = 0;
  int threads = 1;
  double tol = kDefaultTolerance;
};

std::string join(const std::vector<int>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

RunHeader base_header(const std::string& command) {
  return {{"tool", "chaoslab"},
          {"version", std::string(kToolVersion)},
          {"generator", std::string(kGeneratorVersion)},
          {"command", command}};
}

void add_sampling(RunHeader& header, const Common& c) {
  header.emplace_back("seed", std::to_string(c.seed));
  header.emplace_back("samples", std::to_string(c.samples));
  const std::size_t block = c.block_size ? c.block_size : default_block_size(c.samples);
  header.emplace_back("block_size", std::to_string(c.samples ? block : 0));
}

std::string dictionary_text(const Dictionary& dict) {
  std::string s;
  for (std::size_t j = 0; j < dict.size(); ++j) {
    if (j) s += " | ";
    for (std::size_t k = 0; k < dict[j].size(); ++k) s += (k ? " " : "") + dict[j][k].id();
  }
  return s;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
  } else {
    atomic_write(c.out_path, text);
  }
}

ChaosVector read_manifest(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  ChaosVector v = load_vector(path, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
  return v;
}

MonteCarloOptions mc_options(const Common& c) { return {c.threads, c.block_size}; }

int cmd_contract(const std::string& f_path, const std::string& g_path, int r, bool symmetric,
                 const Common& c, std::ostream& out) {
  const SymmetricTensor f = load_kernel(f_path);
  const SymmetricTensor g = load_kernel(g_path);
  RunHeader header = base_header("contract");
  header.emplace_back("f", f_path);
  header.emplace_back("g", g_path);
  header.emplace_back("r", std::to_string(r));
  if (symmetric) {
    const SymmetricTensor s = contract_sym(f, g, r);
    header.emplace_back("symmetrized", "true");
    header.emplace_back("contraction_norm", format_double(contraction_norm(f, g, r)));
    header.emplace_back("symmetrized_norm", format_double(s.norm()));
    emit(c, kernel_to_text(s, header), out);
  } else {
    header.emplace_back("symmetrized", "false");
    emit(c, raw_tensor_to_text(contract(f, g, r), header), out);
  }
  return kExitPass;
}

int cmd_cov2(const std::string& manifest, const Common& c, std::ostream& out, std::ostream& err) {
  const ChaosVector v = read_manifest(manifest, err);
  IndependenceReport report;
  report.matrix = squared_cov_matrix(v);
  report.table = contraction_table(v);
  report.verdict = criterion_check(report.table, c.tol);
  RunHeader header = base_header("cov2");
  header.emplace_back("manifest", manifest);
  header.emplace_back("tol", format_double(c.tol));
  emit(c, report_csv(report, header), out);
  const bool pass = report.verdict.covariance_pass && report.verdict.contraction_pass;
  return pass ? kExitPass : kExitFail;
}

int cmd_check(const std::string& manifest, const std::string& format, const Common& c,
              std::ostream& out, std::ostream& err) {
  const ChaosVector v = read_manifest(manifest, err);
  const Dictionary dict = default_dictionary_for(v);
  const IndependenceReport report = build_report(v, c.tol, dict, c.samples, c.seed, mc_options(c));
  RunHeader header = base_header("check");
  header.emplace_back("manifest", manifest);
  header.emplace_back("tol", format_double(c.tol));
  add_sampling(header, c);
  header.emplace_back("dictionary", dictionary_text(dict));
  emit(c, format == "json" ? report_json(report, header) : report_csv(report, header), out);
  const bool pass = report.verdict.covariance_pass && report.verdict.contraction_pass;
  return pass ? kExitPass : kExitFail;
}

int cmd_sweep(FamilySpec spec, const std::vector<int>& ns, const Common& c, std::ostream& out) {
  RunHeader header = base_header("sweep");
  header.emplace_back("family", std::string(family_name(spec.family)));
  header.emplace_back("orders", join(spec.orders));
  header.emplace_back("sizes", join(spec.group_sizes));
  header.emplace_back("theta", format_double(spec.theta));
  header.emplace_back("n", join(ns));
  header.emplace_back("tol", format_double(c.tol));
  add_sampling(header, c);

  std::ostringstream body;
  std::optional<std::string> dictionary;
  for (int n : ns) {
    spec.n = n;
    const ChaosVector v = generate(spec);
    const CriterionVerdict verdict = criterion_check(v, c.tol);
    const double nan = std::nan("");
    double gap = nan, se = nan, ratio = nan;
    if (c.samples > 0) {
      const Dictionary dict = default_dictionary_for(v);
      if (!dictionary) dictionary = dictionary_text(dict);
      const DependenceEstimate e = empirical_dependence(v, dict, c.samples, c.seed, mc_options(c));
      gap = e.gap;
      se = e.std_error;
      try {
        ratio = bound_ratio(v, dict, e);
      } catch (const DegenerateInput&) {
      }
    }
    body << n << ',' << format_double(verdict.covariance_witness) << ','
         << format_double(verdict.contraction_witness) << ',' << format_double(gap) << ','
         << format_double(se) << ',' << format_double(ratio) << '\n';
  }
  if (dictionary) header.emplace_back("dictionary", *dictionary);

  std::ostringstream os;
  for (const auto& [key, value] : header) os << "# " << key << ": " << value << '\n';
  os << "n,cov2_witness,contraction_witness,empirical_gap,stderr,bound_ratio\n" << body.str();
  emit(c, os.str(), out);
  return kExitPass;
}

int cmd_simulate(const std::string& manifest, const Common& c, std::ostream& out,
                 std::ostream& err) {
  const ChaosVector v = read_manifest(manifest, err);
  if (c.samples < 1) throw ContractViolation("simulate needs --samples >= 1");
  const SampleBatch batch = sample(c.seed, v.space().dimension(), c.samples, c.block_size);
  const EvaluationPlan plan(v.elements());
  const auto dim = static_cast<std::size_t>(batch.dimension());
  const std::vector<std::string> rows = map_blocks<std::string>(
      batch, c.threads, [&](std::size_t, std::span<const double> x, std::size_t count) {
        std::vector<double> scratch(plan.scratch_size());
        std::vector<double> values(plan.size());
        std::string text;
        for (std::size_t s = 0; s < count; ++s) {
          plan.evaluate(x.subspan(s * dim, dim), scratch, values);
          for (std::size_t k = 0; k < values.size(); ++k) {
            text += (k ? "," : "") + format_double(values[k]);
          }
          text += '\n';
        }
        return text;
      });

  RunHeader header = base_header("simulate");
  header.emplace_back("manifest", manifest);
  add_sampling(header, c);
  std::ostringstream os;
  for (const auto& [key, value] : header) os << "# " << key << ": " << value << '\n';
  for (std::size_t k = 0; k < v.element_count(); ++k) {
    os << (k ? "," : "") << 'F' << k + 1 << "_g" << v.group_of(k) + 1;
  }
  os << '\n';
  for (const std::string& r : rows) os << r;
  emit(c, os.str(), out);
  return kExitPass;
}

void add_out(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_path, "Write to this file (atomically) instead of stdout");
}

void add_tol(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "Tolerance for the exact conditions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_mc(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--samples", c.samples, "Monte Carlo sample count (0 skips sampling)")
      ->capture_default_str();
  cmd->add_option("--block-size", c.block_size, "Rows per sample block (0: automatic)")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Independence diagnostics for vectors of Wiener chaos elements", "chaoslab"};
  app.footer(kFileFormats);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common c;

  std::string f_path, g_path;
  int r = 1;
  bool symmetric = false;
  auto* contract_cmd = app.add_subcommand("contract", "r-th contraction of two kernel files");
  contract_cmd->add_option("f", f_path, "First kernel file")->required();
  contract_cmd->add_option("g", g_path, "Second kernel file")->required();
  contract_cmd->add_option("-r,--r", r, "Number of contracted slots")->capture_default_str();
  contract_cmd->add_flag("--symmetrize", symmetric, "Symmetrize the result");
  add_out(contract_cmd, c);

  std::string manifest;
  auto* cov2_cmd = app.add_subcommand(
      "cov2", "Squared-covariance and contraction-norm table (CSV); exit 1 if a witness >= tol");
  cov2_cmd->add_option("manifest", manifest, "Vector manifest")->required();
  add_tol(cov2_cmd, c);
  add_out(cov2_cmd, c);

  std::string format = "csv";
  auto* check_cmd = app.add_subcommand(
      "check", "Exact conditions plus the Monte Carlo dependence estimate; exit 1 on failure");
  check_cmd->add_option("manifest", manifest, "Vector manifest")->required();
  check_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_tol(check_cmd, c);
  add_mc(check_cmd, c);
  add_out(check_cmd, c);

  std::string family = "vanishing_overlap";
  FamilySpec spec;
  std::vector<int> ns{4, 16, 64};
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Witnesses, empirical gap and bound ratio along a generated family (CSV)");
  sweep_cmd->add_option("--family", family, "disjoint, vanishing_overlap, persistent_overlap or mixed_orders")
      ->capture_default_str();
  auto* orders_opt = sweep_cmd->add_option("--orders", spec.orders,
                                           "Chaos order of each group (mixed_orders: 3,2)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--sizes", spec.group_sizes, "Number of elements in each group")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--theta", spec.theta, "Overlap parameter in [0, 1]")->capture_default_str();
  sweep_cmd->add_option("--n", ns, "Sequence indices")->delimiter(',')->capture_default_str();
  add_tol(sweep_cmd, c);
  add_mc(sweep_cmd, c);
  add_out(sweep_cmd, c);

  auto* simulate_cmd =
      app.add_subcommand("simulate", "Sampled values of every element of a manifest (CSV)");
  simulate_cmd->add_option("manifest", manifest, "Vector manifest")->required();
  add_mc(simulate_cmd, c);
  add_out(simulate_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*contract_cmd) return cmd_contract(f_path, g_path, r, symmetric, c, out);
    if (*cov2_cmd) return cmd_cov2(manifest, c, out, err);
    if (*check_cmd) return cmd_check(manifest, format, c, out, err);
    if (*sweep_cmd) {
      spec.family = parse_family(family);
      if (spec.family == Family::mixed_orders && orders_opt->count() == 0) spec.orders = {3, 2};
      if (ns.empty()) throw ContractViolation("--n needs at least one value");
      return cmd_sweep(spec, ns, c, out);
    }
    if (*simulate_cmd) return cmd_simulate(manifest, c, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace chaoslab::cli

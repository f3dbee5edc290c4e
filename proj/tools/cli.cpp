#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shotgun/assembler.hpp"
#include "shotgun/errors.hpp"
#include "shotgun/harness.hpp"
#include "shotgun/io.hpp"
#include "shotgun/spoiler.hpp"
#include "shotgun/symmetry.hpp"

namespace shotgun::cli {

namespace {

constexpr const char* kSweepHelp = R"(Spec file: one key=value per line, '#' starts a comment.
  d, n, q, r       comma separated integers or a..b ranges (cartesian grid)
  trials           trials per cell (>= 1)
  seed             base seed
  mode             oriented | symmetric
  tasks            comma separated subset of assemble, spoil, openness
  max_vertices     cells with more vertices are skipped
  spoil_budget     candidate sets evaluated by the multiset spoiler
  spoil_max_size   largest swap set tried by the multiset spoiler
  threads          worker threads (0 = all cores))";

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text << '\n';
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path + " for writing");
  file << text << '\n';
}

std::vector<int> parse_labels(const std::string& text) {
  std::vector<int> labels;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      labels.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InvalidConfig("bad label '" + item + "'");
    }
  }
  return labels;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shotgun assembly toolkit for random lattice labelings", "sgl"};
  app.require_subcommand(1);
  int code = kOk;

  // generate
  auto* generate = app.add_subcommand("generate", "Sample an i.i.d. uniform labeling");
  int g_d = 2, g_n = 32, g_q = 2;
  std::uint64_t g_seed = 0;
  std::string g_out;
  generate->add_option("-d,--dim", g_d, "Dimension")->required();
  generate->add_option("-n,--side", g_n, "Side length")->required();
  generate->add_option("-q,--alphabet", g_q, "Alphabet size")->required();
  generate->add_option("-s,--seed", g_seed, "Seed");
  generate->add_option("-o,--output", g_out, "Labeling file")->required();
  generate->callback([&] {
    const auto config = LatticeConfig::make(g_d, g_n, g_q, std::min(2, g_n));
    save_labeling(g_out, sample_labeling(config, g_seed));
  });

  // shatter
  auto* shatter_cmd = app.add_subcommand("shatter", "Write the r-box profile of a labeling");
  std::string s_in, s_out;
  int s_r = 2;
  bool s_symmetric = false;
  shatter_cmd->add_option("labeling", s_in, "Labeling file")->required();
  shatter_cmd->add_option("-r,--box", s_r, "Observation side r")->required();
  shatter_cmd->add_option("-o,--output", s_out, "Shard file")->required();
  shatter_cmd->add_flag("--symmetric", s_symmetric, "Record shards up to rotation/reflection");
  shatter_cmd->callback([&] {
    const Labeling labeling = load_labeling(s_in, s_r);
    save_profile(s_out, s_symmetric ? shatter_symmetric(labeling) : shatter(labeling));
  });

  // assemble
  auto* assemble_cmd = app.add_subcommand("assemble", "Reconstruct a labeling from a shard file");
  std::string a_in, a_out, a_report;
  bool a_symmetric = false;
  assemble_cmd->add_option("shards", a_in, "Shard file")->required();
  assemble_cmd->add_option("-o,--output", a_out, "Labeling file written on success")->required();
  assemble_cmd->add_option("--report", a_report, "Report JSON path ('-' for stdout)");
  assemble_cmd->add_flag("--symmetric", a_symmetric, "Shards are canonical (rotation/reflection) patterns");
  assemble_cmd->callback([&] {
    const Profile profile = load_profile(a_in);
    if (a_symmetric != (profile.kind() == ProfileKind::kCanonical))
      throw PreconditionError(a_symmetric ? "--symmetric needs a canonical shard file"
                                          : "canonical shard file: pass --symmetric");
    const AssemblyResult result = a_symmetric ? assemble_symmetric(profile) : assemble(profile);
    if (!a_report.empty()) write_text(a_report, report_to_json(result.report), out);
    if (result.labeling) {
      save_labeling(a_out, *result.labeling);
    } else {
      err << "assembly failed: " << to_string(result.report.failure_reason) << '\n';
      code = kFailure;
    }
  });

  // spoil
  auto* spoil = app.add_subcommand("spoil", "Search for a non-identifiability certificate");
  std::string p_in, p_out = "-", p_strategy = "singleton";
  int p_r = 2, p_max_size = 2;
  std::uint64_t p_budget = 100000, p_seed = 0;
  bool p_symmetric = false;
  spoil->add_option("labeling", p_in, "Labeling file")->required();
  spoil->add_option("-r,--box", p_r, "Observation side r")->required();
  spoil->add_option("--strategy", p_strategy, "1d | singleton | multiset")
      ->check(CLI::IsMember({"1d", "singleton", "multiset"}));
  spoil->add_option("--max-size", p_max_size, "Largest swap set (multiset)");
  spoil->add_option("--budget", p_budget, "Candidate sets evaluated (multiset)");
  spoil->add_option("--seed", p_seed, "Search seed (multiset)");
  spoil->add_flag("--symmetric", p_symmetric, "Require a non-isomorphic twin");
  spoil->add_option("-o,--output", p_out, "Certificate JSON path ('-' for stdout)");
  spoil->callback([&] {
    const Labeling labeling = load_labeling(p_in, p_r);
    std::optional<std::string> json;
    if (p_strategy == "1d") {
      const auto cert = p_symmetric ? spoil_1d_symmetric(labeling) : spoil_1d(labeling);
      if (cert) json = certificate_to_json(labeling, *cert);
    } else {
      const auto cert = p_strategy == "singleton"
                            ? find_singleton_swap(labeling, p_symmetric)
                            : find_multiset_swap(labeling, p_max_size, p_budget, p_seed, p_symmetric);
      if (cert) json = certificate_to_json(labeling, *cert);
    }
    if (json) {
      write_text(p_out, *json, out);
    } else {
      err << "no certificate found\n";
      code = kFailure;
    }
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Re-check a certificate against its labeling");
  std::string v_in, v_cert, v_out;
  int v_r = 2;
  bool v_symmetric = false;
  verify->add_option("labeling", v_in, "Labeling file")->required();
  verify->add_option("certificate", v_cert, "Certificate JSON")->required();
  verify->add_option("-r,--box", v_r, "Observation side r")->required();
  verify->add_flag("--symmetric", v_symmetric, "Check the rotation/reflection model");
  verify->add_option("-o,--output", v_out, "Write the permuted labeling here");
  verify->callback([&] {
    const Labeling labeling = load_labeling(v_in, v_r);
    const Labeling permuted = permuted_from_certificate(labeling, read_text(v_cert));
    const bool ok = v_symmetric ? verify_nonidentifiable_symmetric(labeling, permuted)
                                : verify_nonidentifiable(labeling, permuted);
    if (!v_out.empty()) save_labeling(v_out, permuted);
    out << (ok ? "valid" : "invalid") << '\n';
    if (!ok) code = kFailure;
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Decide identifiability by exhaustive enumeration");
  std::string o_in, o_labels;
  int o_r = 2, o_d = 1, o_n = 0, o_q = 2;
  std::uint64_t o_cap = kDefaultEnumerationCap;
  oracle->add_option("labeling", o_in, "Labeling file");
  oracle->add_option("--labels", o_labels, "Comma separated labels in row-major order (instead of a file)");
  oracle->add_option("-d,--dim", o_d, "Dimension (with --labels)");
  oracle->add_option("-n,--side", o_n, "Side length (with --labels)");
  oracle->add_option("-q,--alphabet", o_q, "Alphabet size (with --labels)");
  oracle->add_option("-r,--box", o_r, "Observation side r")->required();
  oracle->add_option("--cap", o_cap, "Largest number of labelings to enumerate");
  oracle->callback([&] {
    std::optional<Labeling> labeling;
    if (!o_labels.empty() && !o_in.empty()) throw InvalidConfig("give either a labeling file or --labels");
    if (!o_labels.empty()) {
      const std::vector<int> labels = parse_labels(o_labels);
      if (o_n == 0) {
        // infer n from the label count
        o_n = static_cast<int>(std::lround(std::pow(static_cast<double>(labels.size()), 1.0 / o_d)));
      }
      labeling = Labeling::from_labels(LatticeConfig::make(o_d, o_n, o_q, o_r), labels);
    } else if (!o_in.empty()) {
      labeling = load_labeling(o_in, o_r);
    } else {
      throw InvalidConfig("oracle needs a labeling file or --labels");
    }
    const auto twin = brute_force_twin(labeling->config(), *labeling, o_cap);
    if (twin) {
      out << "non-identifiable\n";
      std::string witness;
      for (std::size_t i = 0; i < twin->size(); ++i) witness += (i ? "," : "") + std::to_string(twin->label_at(i));
      out << "witness " << witness << '\n';
      code = kFailure;
    } else {
      out << "identifiable\n";
    }
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo parameter sweep");
  sweep->footer(kSweepHelp);
  std::string w_in, w_out = "-";
  int w_threads = -1;
  sweep->add_option("spec", w_in, "Spec file")->required();
  sweep->add_option("-o,--output", w_out, "CSV path ('-' for stdout)");
  sweep->add_option("--threads", w_threads, "Override the spec's thread count");
  sweep->callback([&] {
    SweepSpec spec = parse_sweep_spec(read_text(w_in));
    if (w_threads >= 0) spec.threads = w_threads;
    std::ostringstream csv;
    write_sweep_csv(csv, run_sweep(spec));
    std::string text = csv.str();
    text.pop_back();
    write_text(w_out, text, out);
  });

  // stats
  auto* stats = app.add_subcommand("stats", "Open-box fraction and closed components of a labeling");
  std::string t_in, t_out = "-";
  int t_r = 2;
  bool t_symmetric = false;
  stats->add_option("labeling", t_in, "Labeling file")->required();
  stats->add_option("-r,--box", t_r, "Observation side r")->required();
  stats->add_flag("--symmetric", t_symmetric, "Uniqueness up to rotation/reflection");
  stats->add_option("-o,--output", t_out, "JSON path ('-' for stdout)");
  stats->callback([&] { write_text(t_out, openness_to_json(openness_stats(load_labeling(t_in, t_r), t_symmetric)), out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return code;
}

}  // namespace shotgun::cli

// pinerve: build partition nerves, their equivariant matchings and quotients,
// compute homology, and run the acceptance checks.
//
// Exit codes: 0 success, 1 a verification failed, 2 invalid configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pinerve/complex.hpp"
#include "pinerve/homology.hpp"
#include "pinerve/morse.hpp"
#include "pinerve/partition_matching.hpp"
#include "pinerve/perm.hpp"
#include "pinerve/verification.hpp"

using namespace pinerve;
using nlohmann::json;

namespace
{

constexpr int kMaxN = 7;

struct Config
{
  int n = 0;
  std::vector<std::string> group;
  std::string format = "json";
  std::string out;
  int max_dim = -1;
  std::string dump_matching;
};

struct ConfigError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Output
{
  json data;
  std::string csv;
  std::string text;
};

PermGroup parse_group(const Config& cfg)
{
  std::vector<Permutation> gens;
  for (const auto& text : cfg.group) {
    try {
      for (auto& g : parse_generators(text, cfg.n))
        gens.push_back(std::move(g));
    } catch (const ParseError& e) {
      throw ConfigError("invalid --group \"" + text + "\": " + e.what());
    }
  }
  return PermGroup(cfg.n, std::move(gens));
}

std::string group_label(const PermGroup& g)
{ return g.generators().empty() ? "trivial" : g.description(); }

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ConfigError("cannot open " + path + " for writing");
  f << content;
}

std::string join(const std::vector<std::size_t>& xs, const char* sep = ",")
{
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? sep : "") + std::to_string(xs[i]);
  return out;
}

std::string homology_text(const HomologyResult& h)
{
  std::ostringstream out;
  for (const auto& g : h.groups) {
    out << (h.reduced ? "H~_" : "H_") << g.dim << " = ";
    std::vector<std::string> parts;
    if (g.betti)
      parts.push_back("Z^" + std::to_string(g.betti));
    for (const auto& t : g.torsion)
      parts.push_back("Z/" + t.str());
    if (parts.empty())
      out << "0";
    for (std::size_t i = 0; i < parts.size(); ++i)
      out << (i ? " + " : "") << parts[i];
    out << '\n';
  }
  return out.str();
}

Output run_complex(const Config& cfg)
{
  const auto c = partition_nerve(cfg.n);
  Output o;
  o.data = {{"n", cfg.n}, {"fVector", c.f_vector()}, {"eulerCharacteristic", c.euler_characteristic()}};
  o.csv = "dim,cells\n";
  for (std::size_t d = 0; d < c.f_vector().size(); ++d)
    o.csv += std::to_string(d) + ',' + std::to_string(c.f_vector()[d]) + '\n';
  o.text = "order complex of the proper part of Pi_" + std::to_string(cfg.n) + "\nf-vector: (" +
           join(c.f_vector(), ", ") + ")\nEuler characteristic: " +
           std::to_string(c.euler_characteristic()) + '\n';
  return o;
}

Output run_matching(const Config& cfg, int& status)
{
  MainMatchingBuilder builder(MainMatchingOptions{cfg.n <= 6});
  Output o;
  o.data = matching_report(builder, cfg.n);
  const auto& certs = o.data["certificates"];
  const bool ok = certs["acyclic"].get<bool>() && certs["criticalSetMatches"].get<bool>() &&
                  (certs["equivariant"].is_null() || certs["equivariant"].get<bool>());
  if (!ok) {
    status = 1;
    std::cerr << "pinerve: main matching certificate failed for n=" << cfg.n << '\n';
  }
  if (!cfg.dump_matching.empty())
    write_file(cfg.dump_matching, dump_matching(builder.main_matching(cfg.n), builder.level(cfg.n).complex()));

  auto cert_text = [&](const char* key) {
    return certs[key].is_null() ? std::string("not checked") : certs[key].dump();
  };
  const auto counts = o.data["criticalCounts"].get<std::vector<std::size_t>>();
  o.csv = "n,criticalCounts,cardinalityCn,acyclic,equivariant,criticalSetMatches\n" +
          std::to_string(cfg.n) + ',' + join(counts, ";") + ',' +
          o.data["cardinalityCn"].dump() + ',' + cert_text("acyclic") + ',' + cert_text("equivariant") +
          ',' + cert_text("criticalSetMatches") + '\n';
  o.text = "main matching for n=" + std::to_string(cfg.n) + "\ncritical cells by dimension: (" +
           join(counts, ", ") + ")\n|C_n| = " + o.data["cardinalityCn"].dump() +
           "\nacyclic: " + cert_text("acyclic") + "\nequivariant: " + cert_text("equivariant") +
           "\ncritical set is C_n plus alpha_n: " + cert_text("criticalSetMatches") + '\n';
  return o;
}

Output run_quotient(const Config& cfg, int& status)
{
  const PermGroup group = parse_group(cfg);
  MainMatchingBuilder builder;
  const auto& level = builder.level(cfg.n);
  const PermGroup full = point_stabilizer_group(cfg.n);
  const bool inside = group.is_subgroup_of(full);

  Output o;
  o.data["n"] = cfg.n;
  o.data["group"] = group_label(group);
  o.data["groupOrder"] = group.order();

  const auto q = quotient_complex(level.complex(), group);
  o.data["fVector"] = q.cells.f_vector();
  const auto h = homology_of(q.cells);
  o.data["homology"] = to_json(h);

  o.csv = "dim,orbit,representative\n";
  o.text = "quotient of the order complex of the proper part of Pi_" + std::to_string(cfg.n) +
           " by G = <" + group_label(group) + "> (order " + std::to_string(group.order()) +
           ")\nf-vector: (" + join(q.cells.f_vector(), ", ") + ")\n";
  if (!inside) {
    std::cerr << "pinerve: warning: G does not fix 1; skipping the quotient matching and reporting "
                 "homology only\n";
    o.data["criticalCells"] = nullptr;
    o.data["wedgeCount"] = nullptr;
  } else {
    const std::size_t index = full.order() / group.order();
    const auto qm = quotient_critical_cells(builder, cfg.n, group);
    const bool full_group = group.order() == full.order();
    auto cells = json::array();
    for (CellId c : qm.matching->critical_cells()) {
      const int dim = qm.quotient->cells.dim(c);
      const CellId rep = qm.quotient->representative[static_cast<std::size_t>(c)];
      json entry{{"dim", dim}, {"orbit", c}, {"representative", level.complex().label(rep)}};
      if (full_group) {
        std::vector<std::string> labels;
        for (int v : level.complex().vertices(rep))
          labels.push_back(number_partition_label(level.complex().ground()[static_cast<std::size_t>(v)]));
        entry["labels"] = labels;
      }
      o.csv += std::to_string(dim) + ',' + std::to_string(c) + ",\"" + level.complex().label(rep) + "\"\n";
      o.text += "critical " + std::to_string(dim) + "-cell: " + level.complex().label(rep) + '\n';
      cells.push_back(entry);
    }
    o.data["criticalCells"] = cells;
    o.data["criticalCounts"] = qm.matching->critical_counts();
    o.data["index"] = index;
    const bool wedge = verify_wedge(h, cfg.n - 3, index);
    o.data["wedgeCount"] = wedge ? json(index) : json(nullptr);
    o.text += "index of G: " + std::to_string(index) + "\n";
    if (!wedge || cells.size() != index + 1) {
      status = 1;
      std::cerr << "pinerve: quotient certificate failed: expected a wedge of " << index
                << " spheres and " << index + 1 << " critical cells\n";
    }
    if (!cfg.dump_matching.empty()) {
      std::string dump;
      for (const auto& [a, b] : qm.matching->pairs())
        dump += level.complex().label(qm.quotient->representative[static_cast<std::size_t>(a)]) + " -> " +
                level.complex().label(qm.quotient->representative[static_cast<std::size_t>(b)]) + '\n';
      write_file(cfg.dump_matching, dump);
    }
  }
  o.text += homology_text(h);
  return o;
}

Output run_homology(const Config& cfg)
{
  const PermGroup group = parse_group(cfg);
  const auto c = partition_nerve(cfg.n);
  HomologyResult h;
  if (group.order() == 1)
    h = homology_of(c.cells(), true, cfg.max_dim);
  else
    h = homology_of(quotient_complex(c, group).cells, true, cfg.max_dim);
  Output o;
  o.data = to_json(h);
  o.csv = to_csv(h);
  o.text = homology_text(h);
  return o;
}

Output run_verify(const Config& cfg, int& status)
{
  AcceptanceRunner runner({cfg.n});
  Output o;
  auto criteria = json::array();
  bool all = true;
  o.csv = "id,applicable,passed,title\n";
  for (const auto& r : runner.run_all()) {
    criteria.push_back(to_json(r));
    all = all && r.passed;
    if (!r.passed)
      std::cerr << "pinerve: criterion " << r.id << " failed (" << r.title << "): " << r.detail << '\n';
    o.csv += std::to_string(r.id) + ',' + (r.applicable ? "true" : "false") + ',' +
             (r.passed ? "true" : "false") + ",\"" + r.title + "\"\n";
    o.text += "AC" + std::to_string(r.id) + (r.id < 10 ? "  " : " ") +
              (r.applicable ? (r.passed ? "PASS " : "FAIL ") : "SKIP ") + r.title + ": " + r.detail + '\n';
  }
  MainMatchingBuilder builder(MainMatchingOptions{cfg.n <= 6});
  o.data = {{"n", cfg.n}, {"passed", all}, {"criteria", criteria},
            {"report", matching_report(builder, cfg.n)}};
  if (!all)
    status = 1;
  return o;
}

Output run_report(const Config& cfg, int& status)
{
  MainMatchingBuilder builder;
  auto levels = json::array();
  Output o;
  o.csv = "n,criticalCounts,cardinalityCn,acyclic,equivariant,criticalSetMatches,orbits,stabilizerOrder\n";
  for (int n = 3; n <= cfg.n; ++n) {
    auto entry = matching_report(builder, n);
    const auto& certs = entry["certificates"];
    for (const char* key : {"acyclic", "equivariant", "criticalSetMatches"})
      if (!certs[key].is_null() && !certs[key].get<bool>()) {
        status = 1;
        std::cerr << "pinerve: certificate " << key << " failed for n=" << n << '\n';
      }
    const auto counts = entry["criticalCounts"].get<std::vector<std::size_t>>();
    auto field = [&](const json& v) { return v.is_null() ? std::string() : v.dump(); };
    o.csv += std::to_string(n) + ',' + join(counts, ";") + ',' + entry["cardinalityCn"].dump() + ',' +
             field(certs["acyclic"]) + ',' + field(certs["equivariant"]) + ',' +
             field(certs["criticalSetMatches"]) + ',' + entry["orbitData"]["orbits"].dump() + ',' +
             entry["orbitData"]["stabilizerOrder"].dump() + '\n';
    o.text += "n=" + std::to_string(n) + ": critical (" + join(counts, ", ") + "), |C_n| = " +
              entry["cardinalityCn"].dump() + '\n';
    levels.push_back(std::move(entry));
  }
  o.data = {{"levels", levels}};
  return o;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Partition-lattice nerves: equivariant Morse matchings, quotients and homology"};
  app.require_subcommand(1);

  Config cfg;
  auto add_common = [&](CLI::App* sub, bool with_group) {
    sub->add_option("--n", cfg.n, "ground set size (3.." + std::to_string(kMaxN) + ")")->required();
    sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out, "write output to this file instead of stdout");
    if (with_group)
      sub->add_option("--group", cfg.group,
                      "generators in cycle notation, e.g. \"(2 3),(2 3 4 5)\"; empty for the trivial group");
  };

  auto* complex_cmd = app.add_subcommand("complex", "f-vector and Euler characteristic of the nerve");
  add_common(complex_cmd, false);
  auto* matching_cmd = app.add_subcommand("matching", "build the main matching and its certificates");
  add_common(matching_cmd, false);
  matching_cmd->add_option("--dump-matching", cfg.dump_matching, "write the matched pairs to this file");
  auto* quotient_cmd = app.add_subcommand("quotient", "quotient complex, quotient matching and homology");
  add_common(quotient_cmd, true);
  quotient_cmd->add_option("--dump-matching", cfg.dump_matching, "write the matched pairs to this file");
  auto* homology_cmd = app.add_subcommand("homology", "reduced integral homology of the nerve or a quotient");
  add_common(homology_cmd, true);
  homology_cmd->add_option("--max-dim", cfg.max_dim, "highest dimension to compute")
    ->check(CLI::NonNegativeNumber);
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks applicable to n");
  add_common(verify_cmd, false);
  auto* report_cmd = app.add_subcommand("report", "aggregate matching report for 3..n");
  add_common(report_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  int status = 0;
  try {
    if (cfg.n < 3 || cfg.n > kMaxN)
      throw ConfigError("--n must be between 3 and " + std::to_string(kMaxN));
    Output o;
    if (complex_cmd->parsed())
      o = run_complex(cfg);
    else if (matching_cmd->parsed())
      o = run_matching(cfg, status);
    else if (quotient_cmd->parsed())
      o = run_quotient(cfg, status);
    else if (homology_cmd->parsed())
      o = run_homology(cfg);
    else if (verify_cmd->parsed())
      o = run_verify(cfg, status);
    else
      o = run_report(cfg, status);

    std::string rendered = cfg.format == "csv" ? o.csv : cfg.format == "text" ? o.text : o.data.dump(2) + '\n';
    if (cfg.out.empty())
      std::cout << rendered;
    else
      write_file(cfg.out, rendered);
  } catch (const ConfigError& e) {
    std::cerr << "pinerve: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "pinerve: " << e.what() << '\n';
    return 2;
  }
  return status;
}

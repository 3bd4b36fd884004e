#ifndef PINERVE_VERIFICATION_HPP
#define PINERVE_VERIFICATION_HPP

// The acceptance checks, shared by the `verify` subcommand and the acceptance
// test binary. Each check runs over the requested ground-set sizes that fall
// inside its own range and reports a single verdict with a short detail line.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pinerve/homology.hpp"
#include "pinerve/morse.hpp"
#include "pinerve/partition_matching.hpp"
#include "pinerve/perm.hpp"

namespace pinerve
{

struct CriterionResult
{
  int id = 0;
  std::string title;
  bool applicable = true;   // false when none of the requested n fall in range
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

inline std::size_t factorial(int k)
{
  std::size_t out = 1;
  for (int i = 2; i <= k; ++i)
    out *= static_cast<std::size_t>(i);
  return out;
}

/// Named subgroups of S_1 x S_{n-1} used for the quotient checks.
struct NamedGroup
{
  std::string name;
  PermGroup group;
};

inline std::vector<NamedGroup> sample_subgroups(int n)
{
  std::vector<NamedGroup> out;
  out.push_back({"trivial", trivial_group(n)});
  out.push_back({"(2 3)", generate_group(n, "(2 3)")});
  if (n == 4)
    out.push_back({"(2 3 4)", generate_group(n, "(2 3 4)")});
  else if (n >= 5)
    out.push_back({"(2 3 4),(3 4 5)", generate_group(n, "(2 3 4),(3 4 5)")});
  out.push_back({"S_1xS_" + std::to_string(n - 1), point_stabilizer_group(n)});
  return out;
}

/// A chain holds at most one atom {1,k | singletons}; counted straight from
/// block sizes.
inline std::size_t atom_count(const Complex& complex, CellId c)
{
  std::size_t atoms = 0;
  for (int v : complex.vertices(c)) {
    const auto& p = complex.ground()[static_cast<std::size_t>(v)];
    if (p.block_count() == p.size() - 1 && p.block_containing(1).size() == 2)
      ++atoms;
  }
  return atoms;
}

/// Every group element carrying a representative fiber r to fiber q carries
/// the matching on r onto the matching on q. Checks all elements or a random
/// sample of them.
inline bool transport_is_well_defined(const NerveLevel& level, const Matching& m,
                                      std::size_t samples, std::mt19937& rng)
{
  std::map<int, std::vector<CellPair>> by_fiber;
  for (const auto& [a, b] : m.pairs())
    by_fiber[phi(level, a)].emplace_back(a, b);
  const auto& group = level.group();
  std::vector<std::size_t> elements(group.order());
  for (std::size_t e = 0; e < elements.size(); ++e)
    elements[e] = e;
  if (samples > 0 && samples < elements.size()) {
    std::shuffle(elements.begin(), elements.end(), rng);
    elements.resize(samples);
  }
  for (int r : {0, level.n() - 1})
    for (std::size_t e : elements) {
      const int q = fiber_target_action(group.element(e), r);
      std::vector<CellPair> moved;
      for (const auto& [a, b] : by_fiber[r])
        moved.emplace_back(level.action().act(e, a), level.action().act(e, b));
      std::sort(moved.begin(), moved.end());
      if (moved != by_fiber[q])
        return false;
    }
  return true;
}

/// psi is a bijection onto the fiber of v_n minus the vertex v_n, and faces
/// correspond in both directions.
inline bool psi_is_isomorphism(const NerveLevel& lower, const NerveLevel& upper)
{
  const auto lift = MainMatchingBuilder::psi_cells(lower, upper);
  const auto& lc = lower.complex().cells();
  const auto& uc = upper.complex().cells();
  const CellId vn = upper.vertex_cell(atom_vertex(upper.n(), upper.n()));
  std::map<CellId, CellId> back;
  for (std::size_t x = 0; x < lift.size(); ++x)
    if (!back.emplace(lift[x], static_cast<CellId>(x)).second)
      return false;
  for (CellId y = 0; static_cast<std::size_t>(y) < uc.size(); ++y) {
    const bool in_fiber = phi(upper, y) == upper.n() - 1 && y != vn;
    if (in_fiber != back.contains(y))
      return false;
  }
  for (CellId x = 0; static_cast<std::size_t>(x) < lc.size(); ++x) {
    if (psi_inverse(psi(lower.complex().simplex(x))) != lower.complex().simplex(x))
      return false;
    for (const auto& inc : lc.boundary(x))
      if (!uc.is_face(lift[static_cast<std::size_t>(inc.face)], lift[static_cast<std::size_t>(x)]))
        return false;
  }
  for (const auto& [y, x] : back)
    for (const auto& inc : uc.boundary(y))
      if (auto it = back.find(inc.face); it != back.end() && !lc.is_face(it->second, x))
        return false;
  return true;
}

/// sigma psi = psi sigma~ for sigma fixing 1 and n. `samples` == 0 means
/// every (sigma, cell) pair.
inline bool psi_intertwines(const NerveLevel& lower, int n, std::size_t samples, std::mt19937& rng)
{
  const auto group = point_stabilizer_group(n);
  std::vector<Permutation> fixing;
  for (const auto& g : group.elements())
    if (g.fixes(n))
      fixing.push_back(g);
  const auto& lc = lower.complex();
  auto check = [&](const Permutation& sigma, CellId x) {
    const auto s = lc.simplex(x);
    return act(sigma, psi(s)) == psi(act(restrict_permutation(sigma), s));
  };
  if (samples == 0) {
    for (const auto& sigma : fixing)
      for (CellId x = 0; static_cast<std::size_t>(x) < lc.size(); ++x)
        if (!check(sigma, x))
          return false;
    return true;
  }
  std::uniform_int_distribution<std::size_t> pick_sigma(0, fixing.size() - 1);
  std::uniform_int_distribution<CellId> pick_cell(0, static_cast<CellId>(lc.size()) - 1);
  for (std::size_t i = 0; i < samples; ++i)
    if (!check(fixing[pick_sigma(rng)], pick_cell(rng)))
      return false;
  return true;
}

/// Runs the acceptance criteria for a set of ground-set sizes, sharing the
/// constructed levels and matchings between criteria.
class AcceptanceRunner
{
public:
  explicit AcceptanceRunner(std::vector<int> ns, unsigned seed = 20261016)
  : ns_(std::move(ns)), rng_(seed)
  {}

  std::vector<CriterionResult> run_all()
  {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 12; ++id)
      out.push_back(run(id));
    return out;
  }

  CriterionResult run(int id)
  {
    static const std::map<int, std::function<CriterionResult(AcceptanceRunner&)>> table{
      {1, &AcceptanceRunner::critical_cardinality},
      {2, &AcceptanceRunner::main_certificates},
      {3, &AcceptanceRunner::fiber_zero},
      {4, &AcceptanceRunner::free_transitive},
      {5, &AcceptanceRunner::wedge_trivial},
      {6, &AcceptanceRunner::wedge_subgroups},
      {7, &AcceptanceRunner::full_quotient},
      {8, &AcceptanceRunner::contractible_quotient},
      {9, &AcceptanceRunner::torsion},
      {10, &AcceptanceRunner::morse_agreement},
      {11, &AcceptanceRunner::cohomology_basis},
      {12, &AcceptanceRunner::property_suites},
    };
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = table.at(id)(*this);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    while (r.detail.ends_with("; ") || r.detail.ends_with(" "))
      r.detail.erase(r.detail.size() - (r.detail.ends_with("; ") ? 2 : 1));
    r.id = id;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.title.empty())
      r.title = title(id);
    if (r.applicable && r.passed && limit(id) > 0 && r.seconds > limit(id)) {
      r.passed = false;
      r.detail += "; exceeded time limit of " + std::to_string(static_cast<int>(limit(id))) + " s";
    }
    return r;
  }

  static std::string title(int id)
  {
    static const std::map<int, std::string> titles{
      {1, "critical-cell cardinality |C_n| = (n-1)!"},
      {2, "main matching certificates"},
      {3, "fiber-zero matching has alpha_n as its only critical cell"},
      {4, "S_1xS_{n-1} acts freely and transitively on C_n"},
      {5, "wedge homology of the full nerve"},
      {6, "wedge homology of quotients by subgroups"},
      {7, "full-group quotient structure"},
      {8, "quotient by S_n is acyclic"},
      {9, "torsion of the cyclic quotient"},
      {10, "Morse and simplicial homology agree"},
      {11, "cohomology basis pairing is unimodular"},
      {12, "property suites: transport, psi, phi"},
    };
    return titles.at(id);
  }

  /// Wall-clock budget per criterion in seconds (0 = none).
  static double limit(int id)
  {
    switch (id) {
    case 2: return 60;
    case 5: return 120;
    case 9: return 30;
    default: return 0;
    }
  }

  MainMatchingBuilder& builder()
  { return builder_; }

private:
  std::vector<int> in_range(int lo, int hi) const
  {
    std::vector<int> out;
    for (int n : ns_)
      if (n >= lo && n <= hi)
        out.push_back(n);
    return out;
  }

  static CriterionResult not_applicable(const std::string& range)
  {
    CriterionResult r;
    r.applicable = false;
    r.passed = true;
    r.detail = "not applicable (checked for " + range + ")";
    return r;
  }

  CriterionResult critical_cardinality()
  {
    const auto ns = in_range(3, 7);
    if (ns.empty())
      return not_applicable("n = 3..7");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto start = std::chrono::steady_clock::now();
      const std::size_t count = special_sets(n).top_chains.size();
      std::size_t critical_top = count;
      if (n == 7) {
        // count-only construction at the largest size
        MainMatchingBuilder fast(MainMatchingOptions{false});
        const auto counts = fast.main_matching(7).critical_counts();
        critical_top = counts.back();
      }
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const bool ok = count == factorial(n - 1) && critical_top == count &&
                      seconds < (n <= 6 ? 1.0 : 120.0);
      r.passed = r.passed && ok;
      detail << "n=" << n << ": " << count << (ok ? "" : " FAIL") << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult main_certificates()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto cert = certify_main_matching(builder_, n);
      std::size_t total = 0;
      for (auto c : cert.critical_counts)
        total += c;
      const bool ok = cert.acyclic && cert.equivariant && cert.critical_set_matches;
      r.passed = r.passed && ok;
      detail << "n=" << n << ": " << total << " critical, acyclic=" << cert.acyclic
             << " equivariant=" << cert.equivariant << " set=" << cert.critical_set_matches << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult fiber_zero()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto& level = builder_.level(n);
      const auto& m = builder_.fiber_zero(n);
      std::vector<CellId> critical;
      for (CellId c : m.critical_cells())
        if (phi(level, c) == 0)
          critical.push_back(c);
      const bool ok = validate_matching(m).is_acyclic && check_equivariance(m, level.action()) &&
                      critical == std::vector<CellId>{level.vertex_cell(alpha_vertex(n))};
      r.passed = r.passed && ok;
      detail << "n=" << n << ": " << critical.size() << " critical in fiber 0" << (ok ? "" : " FAIL")
             << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult free_transitive()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto orbits = orbits_and_stabilizers(point_stabilizer_group(n), special_sets(n).top_chains);
      const bool ok = orbits.size() == 1 && orbits.front().stabilizer_order == 1;
      r.passed = r.passed && ok;
      detail << "n=" << n << ": " << orbits.size() << " orbit(s), stabilizer "
             << (orbits.empty() ? 0 : orbits.front().stabilizer_order) << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult wedge_trivial()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto h = homology_of(builder_.level(n).complex().cells());
      const bool ok = verify_wedge(h, n - 3, factorial(n - 1));
      r.passed = r.passed && ok;
      detail << "n=" << n << ": H~_" << n - 3 << " = Z^" << h.betti(n - 3) << (ok ? "" : " FAIL") << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult wedge_subgroups()
  {
    const auto ns = in_range(4, 5);
    if (ns.empty())
      return not_applicable("n = 4, 5");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns)
      for (const auto& [name, group] : sample_subgroups(n)) {
        const std::size_t index = factorial(n - 1) / group.order();
        const auto q = quotient_critical_cells(builder_, n, group);
        const auto h = homology_of(q.quotient->cells);
        const auto counts = q.matching->critical_counts();
        std::size_t total = 0;
        for (auto c : counts)
          total += c;
        const bool ok = verify_wedge(h, n - 3, index) && total == index + 1 &&
                        counts.front() == 1 && counts.back() == index;
        r.passed = r.passed && ok;
        detail << "n=" << n << " G=" << name << ": index " << index << ", critical " << total
               << (ok ? "" : " FAIL") << "; ";
      }
    r.detail = detail.str();
    return r;
  }

  CriterionResult full_quotient()
  {
    const auto ns = in_range(4, 6);
    if (ns.empty())
      return not_applicable("n = 4..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto& level = builder_.level(n);
      const auto q = quotient_critical_cells(builder_, n, point_stabilizer_group(n));
      const auto critical = q.matching->critical_cells();
      bool ok = critical.size() == 2 && q.quotient->cells.dim(critical[0]) == 0 &&
                q.quotient->cells.dim(critical[1]) == n - 3;
      std::string vertex_label, top_labels;
      if (ok) {
        vertex_label = number_partition_label(level, q, critical[0]);
        const CellId rep = q.quotient->representative[static_cast<std::size_t>(critical[1])];
        std::vector<std::string> labels, expected;
        for (int v : level.complex().vertices(rep))
          labels.push_back(number_partition_label(level.complex().ground()[static_cast<std::size_t>(v)]));
        for (int v0 = 2; v0 <= n - 1; ++v0) {
          std::string label = std::to_string(v0) + "⊕";
          for (int i = 0; i < n - v0; ++i)
            label += i ? "+1" : "1";
          expected.push_back(label);
        }
        for (const auto& l : labels)
          top_labels += (top_labels.empty() ? "" : " < ") + l;
        ok = vertex_label == "1⊕" + std::to_string(n - 1) && labels == expected;
      }
      r.passed = r.passed && ok;
      detail << "n=" << n << ": " << critical.size() << " critical, vertex " << vertex_label << ", top "
             << top_labels << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult contractible_quotient()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto group = symmetric_group(n);
      const auto h = homology_of(quotient_complex(builder_.level(n).complex(), group).cells);
      const bool ok = verify_wedge(h, 0, 0);
      r.passed = r.passed && ok;
      detail << "n=" << n << (ok ? ": acyclic; " : ": FAIL; ");
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult torsion()
  {
    if (in_range(5, 5).empty())
      return not_applicable("n = 5");
    CriterionResult r;
    const auto h = homology_of(
      quotient_complex(builder_.level(5).complex(), generate_group(5, "(1 2 3 4 5)")).cells);
    r.passed = h.betti(1) == 0 && h.torsion(1) == std::vector<Integer>{5};
    std::ostringstream detail;
    detail << std::boolalpha;
    detail << "H~_1 torsion [";
    for (const auto& t : h.torsion(1))
      detail << t;
    detail << "], H~_2 = Z^" << h.betti(2) << " torsion " << h.torsion(2).size() << " factor(s)";
    r.detail = detail.str();
    return r;
  }

  CriterionResult morse_agreement()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::size_t checked = 0;
    std::string failures;
    auto compare = [&](const std::string& what, const Matching& m, const HomologyResult& expected) {
      ++checked;
      if (homology_of(morse_chain_complex(morse_data(m, false))) != expected) {
        r.passed = false;
        failures += " " + what;
      }
    };
    for (int n : ns) {
      const auto expected = homology_of(builder_.level(n).complex().cells());
      compare("main n=" + std::to_string(n), builder_.main_matching(n), expected);
      compare("fiber-zero n=" + std::to_string(n), builder_.fiber_zero(n), expected);
      if (n < 4)
        continue;
      for (const auto& [name, group] : sample_subgroups(n)) {
        const auto q = quotient_critical_cells(builder_, n, group);
        compare("quotient n=" + std::to_string(n) + " G=" + name, *q.matching,
                homology_of(q.quotient->cells));
      }
    }
    r.detail = std::to_string(checked) + " matchings compared" +
               (failures.empty() ? "" : "; mismatches:" + failures);
    return r;
  }

  CriterionResult cohomology_basis()
  {
    const auto ns = in_range(4, 5);
    if (ns.empty())
      return not_applicable("n = 4, 5");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const auto md = morse_data(builder_.main_matching(n));
      const int top = n - 3;
      const auto z = cohomology_representatives(md, top);
      std::vector<Chain> reps;
      for (CellId c : md.critical[static_cast<std::size_t>(top)])
        reps.push_back(md.cycle_reps.at(c));
      bool cycles = true;
      for (const auto& rep : reps)
        cycles = cycles && chain_boundary(*md.complex, rep).empty();
      const Integer det = determinant(pairing_matrix(z, reps));
      const bool ok = cycles && reps.size() == factorial(n - 1) && (det == 1 || det == -1);
      r.passed = r.passed && ok;
      detail << "n=" << n << ": " << reps.size() << "x" << z.size() << " pairing, det " << det
             << (cycles ? "" : ", representatives are not cycles") << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  CriterionResult property_suites()
  {
    const auto ns = in_range(3, 6);
    if (ns.empty())
      return not_applicable("n = 3..6");
    CriterionResult r;
    r.passed = true;
    std::ostringstream detail;
    detail << std::boolalpha;
    for (int n : ns) {
      const bool sampled = n == 6;
      const auto& level = builder_.level(n);
      bool transport = true, iso = true, intertwine = true, unique = true;
      if (n >= 4) {
        transport = transport_is_well_defined(level, builder_.main_matching(n), sampled ? 24 : 0, rng_);
        const auto& lower = builder_.level(n - 1);
        iso = psi_is_isomorphism(lower, level);
        intertwine = psi_intertwines(lower, n, sampled ? 5000 : 0, rng_);
      }
      const auto& complex = level.complex();
      if (sampled) {
        std::uniform_int_distribution<CellId> pick(0, static_cast<CellId>(complex.size()) - 1);
        for (int i = 0; i < 5000 && unique; ++i)
          unique = atom_count(complex, pick(rng_)) <= 1;
      } else {
        for (CellId c = 0; static_cast<std::size_t>(c) < complex.size() && unique; ++c)
          unique = atom_count(complex, c) <= 1;
      }
      const bool ok = transport && iso && intertwine && unique;
      r.passed = r.passed && ok;
      detail << "n=" << n << (sampled ? " (sampled)" : "") << ": transport=" << transport
             << " psi-iso=" << iso << " intertwine=" << intertwine << " phi-unique=" << unique << "; ";
    }
    r.detail = detail.str();
    return r;
  }

  std::vector<int> ns_;
  std::mt19937 rng_;
  MainMatchingBuilder builder_;
};

inline nlohmann::json to_json(const CriterionResult& r)
{
  return {{"id", r.id},         {"title", r.title},   {"applicable", r.applicable},
          {"passed", r.passed}, {"detail", r.detail}};
}

/// One report entry for the main matching at size n. At n = 7 only counts
/// are computed and "equivariant" is null.
inline nlohmann::json matching_report(MainMatchingBuilder& builder, int n)
{
  nlohmann::json j;
  j["n"] = n;
  const auto sets = special_sets(n);
  j["cardinalityCn"] = sets.top_chains.size();
  const auto orbits = orbits_and_stabilizers(point_stabilizer_group(n), sets.top_chains);
  std::size_t stabilizer = 0;
  for (const auto& o : orbits)
    stabilizer = std::max(stabilizer, o.stabilizer_order);
  j["orbitData"] = {{"orbits", orbits.size()}, {"stabilizerOrder", stabilizer}};
  if (n <= 6) {
    const auto cert = certify_main_matching(builder, n);
    j["criticalCounts"] = cert.critical_counts;
    j["certificates"] = {{"acyclic", cert.acyclic},
                         {"equivariant", cert.equivariant},
                         {"criticalSetMatches", cert.critical_set_matches}};
  } else {
    MainMatchingBuilder fast(MainMatchingOptions{false});
    const auto cert = certify_main_matching(fast, n, false);
    j["criticalCounts"] = cert.critical_counts;
    j["certificates"] = {{"acyclic", cert.acyclic},
                         {"equivariant", nullptr},
                         {"criticalSetMatches", cert.critical_set_matches}};
  }
  return j;
}

} // namespace pinerve

#endif // PINERVE_VERIFICATION_HPP

// Quotients of the partition nerve by subgroups of the stabilizer of 1: each
// is a wedge of spheres, one per coset, and the induced Morse matching has
// one critical cell per sphere plus a single vertex.
//
//   quotient_spheres [n]        (default n = 5)

#include <cstdio>
#include <cstdlib>
#include <string>

#include "pinerve/homology.hpp"
#include "pinerve/partition_matching.hpp"
#include "pinerve/verification.hpp"

using namespace pinerve;

int main(int argc, char** argv)
{
  const int n = argc > 1 ? std::atoi(argv[1]) : 5;
  if (n < 4 || n > 6) {
    std::fprintf(stderr, "usage: %s [n]   with 4 <= n <= 6\n", argv[0]);
    return 2;
  }
  MainMatchingBuilder builder;
  std::printf("n = %d, S_1 x S_%d has order %zu\n", n, n - 1, factorial(n - 1));
  for (const auto& [name, group] : sample_subgroups(n)) {
    const auto q = quotient_critical_cells(builder, n, group);
    const auto h = homology_of(q.quotient->cells);
    const std::size_t index = factorial(n - 1) / group.order();
    std::printf("  G = %-18s |G| = %-4zu cells %-6zu critical %-4zu H~_%d = Z^%zu%s\n", name.c_str(),
                group.order(), q.quotient->cells.size(), q.matching->critical_cells().size(), n - 3,
                h.betti(n - 3), verify_wedge(h, n - 3, index) ? "" : "  (not a wedge!)");
  }
  return 0;
}

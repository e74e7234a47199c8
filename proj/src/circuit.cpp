#include "lrec/circuit.hpp"

#include <algorithm>

namespace lrec {

const char* const kCircuitFormula = R"(exists #r1 exists #r2 (
  [lrec x, y, #p : E(x,y) ;
       (P_and(x) and count(y; E(x,y)) = #p)
    or (P_or(x) and not #p = 0)
    or (P_not(x) and #p = 0)
    or P_1(x)
  ](z, (#r1, #r2))
  and forall #r (#r <= #r1 and #r <= #r2)))";

void check_path_property(const Structure& c) {
  const int n = c.size();
  int e = c.vocab().index_of("E");
  if (e < 0) throw DomainError("circuit needs a relation E");
  std::vector<std::vector<int>> in(n), out(n);
  for (auto& t : c.relation(e)) {
    out[t[0]].push_back(t[1]);
    in[t[1]].push_back(t[0]);
  }
  // Kahn's algorithm; leftover vertices lie on or behind a cycle.
  std::vector<int> deg(n), order;
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(in[v].size());
    if (deg[v] == 0) order.push_back(v);
  }
  for (size_t i = 0; i < order.size(); ++i)
    for (int w : out[order[i]])
      if (--deg[w] == 0) order.push_back(w);
  if (static_cast<int>(order.size()) < n) {
    int v = 0;
    while (deg[v] == 0) ++v;
    // Walk backwards through unfinished predecessors until a vertex repeats.
    std::vector<int> seen(n, -1), walk;
    while (seen[v] < 0) {
      seen[v] = static_cast<int>(walk.size());
      walk.push_back(v);
      v = *std::find_if(in[v].begin(), in[v].end(), [&](int u) { return deg[u] > 0; });
    }
    std::vector<int> cycle(walk.begin() + seen[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    throw CircuitRejected("circuit has a cycle", cycle);
  }
  std::vector<Nat> best(n, 1);
  std::vector<int> from(n, -1);
  for (int v : order)
    for (int u : in[v])
      if (Nat p = best[u] * in[v].size(); p > best[v]) {
        best[v] = p;
        from[v] = u;
      }
  for (int v = 0; v < n; ++v)
    if (best[v] > n) {
      std::vector<int> path;
      for (int x = v; x >= 0; x = from[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      throw CircuitRejected("circuit violates the path property", path);
    }
}

bool circuit_value(const Structure& c, int gate, EvalOptions opts) {
  check_path_property(c);
  static const FormulaPtr phi = parse_formula(kCircuitFormula);
  return eval(c, phi, {{"z", gate}}, opts);
}

}  // namespace lrec

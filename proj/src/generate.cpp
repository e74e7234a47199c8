#include "lrec/generate.hpp"

#include <random>
#include <string>

namespace lrec {

namespace {

int draw(std::mt19937_64& rng, int k) { return static_cast<int>(rng() % static_cast<uint64_t>(k)); }

std::vector<std::string> numbered(char stem, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

}  // namespace

DirectedTree random_attachment_tree(int n, uint64_t seed) {
  if (n < 1) throw DomainError("tree size must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<int> parent(n, -1);
  for (int v = 1; v < n; ++v) parent[v] = draw(rng, v);
  return DirectedTree(parent);
}

UGraph random_interval_graph(int n, uint64_t seed) {
  if (n < 1) throw DomainError("graph size must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> iv;
  for (int v = 0; v < n; ++v) {
    int a = draw(rng, 2 * n + 1), b = draw(rng, 2 * n + 1);
    iv.emplace_back(std::min(a, b), std::max(a, b));
  }
  UGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (iv[u].first <= iv[v].second && iv[v].first <= iv[u].second) g.add_edge(u, v);
  return g;
}

Structure random_circuit(int n, uint64_t seed, int max_fan_in) {
  if (n < 1) throw DomainError("circuit size must be at least 1");
  if (max_fan_in < 1) throw DomainError("fan-in bound must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> inputs(n);
  for (int v = 1; v < n; ++v) {
    std::vector<int> open;
    for (int u = 0; u < v; ++u)
      if (static_cast<int>(inputs[u].size()) < max_fan_in) open.push_back(u);
    inputs[open[draw(rng, static_cast<int>(open.size()))]].push_back(v);
  }
  Structure c(Vocabulary({{"E", 2}, {"P_and", 1}, {"P_or", 1}, {"P_not", 1}, {"P_0", 1}, {"P_1", 1}}), n);
  c.set_names(numbered('g', n));
  for (int v = 0; v < n; ++v) {
    for (int u : inputs[v]) c.add("E", {v, u});
    const char* gate;
    if (inputs[v].empty())
      gate = draw(rng, 2) ? "P_1" : "P_0";
    else if (inputs[v].size() == 1)
      gate = draw(rng, 3) == 0 ? "P_not" : (draw(rng, 2) ? "P_and" : "P_or");
    else
      gate = draw(rng, 2) ? "P_and" : "P_or";
    c.add(gate, {v});
  }
  return c;
}

}  // namespace lrec

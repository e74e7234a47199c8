#pragma once

#include "lrec/interval.hpp"
#include "lrec/structure.hpp"
#include "lrec/tree.hpp"

#include <cstdint>

namespace lrec {

// Seeded generators. Draws use mt19937_64 reduced modulo the range so the
// output does not depend on the standard library.

// Vertex v > 0 gets a parent drawn uniformly from 0..v-1.
DirectedTree random_attachment_tree(int n, uint64_t seed);

// Endpoints drawn from [0, 2n]; vertex v gets [min, max] of two draws.
UGraph random_interval_graph(int n, uint64_t seed);

// Tree-shaped circuit over {E, P_and, P_or, P_not, P_0, P_1}, gate 0 the
// output, E(x, y) when y feeds x. Fan-in is at most max_fan_in.
Structure random_circuit(int n, uint64_t seed, int max_fan_in = 2);

}  // namespace lrec

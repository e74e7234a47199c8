#pragma once

#include "lrec/evaluator.hpp"
#include "lrec/structure.hpp"

#include <vector>

namespace lrec {

// Gate z evaluates to 1, over {E, P_and, P_or, P_not, P_0, P_1}.
extern const char* const kCircuitFormula;

struct CircuitRejected : DomainError {
  CircuitRejected(const std::string& what, std::vector<int> witness)
      : DomainError(what), path(std::move(witness)) {}
  std::vector<int> path;
};

// Throws CircuitRejected with a cycle, or with a path whose in-degree
// product (first node excluded) exceeds |C|.
void check_path_property(const Structure& c);

bool circuit_value(const Structure& c, int gate, EvalOptions opts = {});

}  // namespace lrec

// lrec: evaluate formulas, canonise trees and interval graphs, generate inputs.
//
// Exit codes: 0 true / isomorphic / ok, 1 false / not isomorphic,
// 2 usage, parse, binding or evaluation error, 3 input outside the class.

#include "lrec/circuit.hpp"
#include "lrec/evaluator.hpp"
#include "lrec/formula.hpp"
#include "lrec/generate.hpp"
#include "lrec/interval.hpp"
#include "lrec/structure.hpp"
#include "lrec/tree.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lrec;

namespace {

constexpr int kTrue = 0, kFalse = 1, kError = 2, kWrongClass = 3;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for inputs that parse but lie outside the requested class.
struct WrongClass : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw CliError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Structure load_structure(const std::string& path) {
  try {
    return parse_structure(read_file(path));
  } catch (const ParseError& e) {
    throw CliError(path + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.what());
  }
}

FormulaPtr load_formula(const std::string& path) {
  try {
    return parse_formula(read_file(path));
  } catch (const ParseError& e) {
    throw CliError(path + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.what());
  }
}

// First token outside comments decides between the structure format and a
// bare parent array.
bool looks_like_structure(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::string tok;
    if (ls >> tok) return tok == "vocab";
  }
  return false;
}

DirectedTree load_tree(const std::string& path) {
  std::string text = read_file(path);
  if (looks_like_structure(text)) {
    Structure s = load_structure(path);
    try {
      return tree_from_structure(s);
    } catch (const DomainError& e) {
      throw WrongClass(path + ": not a directed tree: " + e.what());
    }
  }
  try {
    return parse_parent_array(text);
  } catch (const DomainError& e) {
    throw WrongClass(path + ": not a directed tree: " + e.what());
  }
}

struct LoadedGraph {
  UGraph graph;
  std::vector<std::string> names;
};

LoadedGraph load_interval_graph(const std::string& path) {
  Structure s = load_structure(path);
  UGraph g;
  try {
    g = graph_from_structure(s);
  } catch (const DomainError& e) {
    throw WrongClass(path + ": not an undirected graph: " + e.what());
  }
  std::vector<std::string> names;
  for (int v = 0; v < s.size(); ++v) names.push_back(s.name_of(v));
  return {g, names};
}

CanonEdges canon_of(const std::string& kind, const std::string& path) {
  if (kind == "tree") return tree_canon(load_tree(path));
  UGraph g = load_interval_graph(path).graph;
  try {
    return interval_canon(g);
  } catch (const NotInterval& e) {
    throw WrongClass(path + ": not an interval graph: " + e.certificate);
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw CliError("bad " + what + " '" + s + "'");
}

Assignment bind_variables(const Structure& a, const FormulaPtr& f, const std::vector<std::string>& binds) {
  Assignment alpha;
  for (const std::string& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError("binding '" + b + "' is not VAR=VALUE");
    Var x = b.substr(0, eq);
    std::string value = b.substr(eq + 1);
    int v;
    if (is_number_var(x)) {
      v = parse_int(value, "number for " + x);
      if (v < 0 || v > a.size()) throw CliError("number " + value + " for " + x + " is outside [0, " + std::to_string(a.size()) + "]");
    } else {
      v = a.element(value);
      if (v < 0) throw CliError("unknown element '" + value + "' for " + x);
    }
    if (!alpha.emplace(x, v).second) throw CliError("variable " + x + " bound twice");
  }
  std::set<Var> free = free_variables(f);
  for (const Var& x : free)
    if (!alpha.count(x)) throw CliError("free variable " + x + " is not bound");
  for (const auto& [x, v] : alpha)
    if (!free.count(x)) throw CliError("variable " + x + " is not free in the formula");
  return alpha;
}

int cmd_eval(const std::string& sfile, const std::string& ffile, const std::vector<std::string>& binds,
             const std::string& engine) {
  Structure a = load_structure(sfile);
  FormulaPtr f = load_formula(ffile);
  Assignment alpha = bind_variables(a, f, binds);
  bool verdict;
  try {
    if (engine == "both") {
      bool m = eval(a, f, alpha, {Engine::Memo});
      bool s = eval(a, f, alpha, {Engine::Stream});
      if (m != s)
        throw CliError(std::string("engines disagree: memo ") + (m ? "true" : "false") + ", stream " +
                       (s ? "true" : "false"));
      verdict = m;
    } else {
      verdict = eval(a, f, alpha, {engine == "stream" ? Engine::Stream : Engine::Memo});
    }
  } catch (const EvalError& e) {
    throw CliError(std::string("evaluation failed: ") + e.what());
  } catch (const DomainError& e) {
    throw CliError(std::string("evaluation failed: ") + e.what());
  }
  std::cout << (verdict ? "true" : "false") << "\n";
  return verdict ? kTrue : kFalse;
}

int cmd_canon(const std::string& kind, const std::string& file, bool model) {
  if (model) {
    if (kind != "interval") throw CliError("--model applies to interval graphs only");
    LoadedGraph lg = load_interval_graph(file);
    try {
      std::cout << format_model(interval_model(lg.graph), lg.names);
    } catch (const NotInterval& e) {
      throw WrongClass(file + ": not an interval graph: " + e.certificate);
    }
    return kTrue;
  }
  std::cout << format_canon(canon_of(kind, file));
  return kTrue;
}

int cmd_iso(const std::string& kind, const std::string& f1, const std::string& f2) {
  bool same = canon_of(kind, f1) == canon_of(kind, f2);
  std::cout << (same ? "isomorphic" : "not isomorphic") << "\n";
  return same ? kTrue : kFalse;
}

int cmd_gen(const std::string& family, int n, uint64_t seed, bool parents, int fan_in) {
  if (n < 1) throw CliError("size must be at least 1");
  if (family == "layered") {
    std::cout << format_structure(generate_layered_graph(n));
  } else if (family == "tree") {
    DirectedTree t = random_attachment_tree(n, seed);
    std::cout << (parents ? format_parent_array(t) + "\n" : format_structure(tree_to_structure(t)));
  } else if (family == "interval") {
    std::cout << format_structure(graph_to_structure(random_interval_graph(n, seed)));
  } else {
    if (fan_in < 1) throw CliError("fan-in must be at least 1");
    std::cout << format_structure(random_circuit(n, seed, fan_in));
  }
  return kTrue;
}

int cmd_check(const std::string& file, bool circuit) {
  std::string text = read_file(file);
  if (!looks_like_structure(text)) {
    if (circuit) throw CliError("--circuit needs a structure file");
    FormulaPtr f = load_formula(file);
    std::cout << "formula " << pretty(f) << "\n";
    std::cout << "free";
    for (const Var& x : free_variables(f)) std::cout << " " << x;
    std::cout << "\n";
    return kTrue;
  }
  Structure s = load_structure(file);
  std::cout << "structure universe " << s.size() << "\n";
  for (const Symbol& sym : s.vocab().symbols())
    std::cout << "relation " << sym.name << "/" << sym.arity << " " << s.relation(sym.name).size() << "\n";
  if (circuit) {
    try {
      check_path_property(s);
    } catch (const CircuitRejected& e) {
      std::string path;
      for (int v : e.path) path += " " + s.name_of(v);
      throw WrongClass(file + ": " + e.what() + ":" + path);
    } catch (const DomainError& e) {
      throw WrongClass(file + ": " + e.what());
    }
    std::cout << "circuit ok\n";
  }
  return kTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate lrec formulas; canonise directed trees and interval graphs."};
  app.require_subcommand(1);

  std::string sfile, ffile, engine = "memo";
  std::vector<std::string> binds;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula on a structure");
  eval_cmd->add_option("structure", sfile, "Structure file")->required();
  eval_cmd->add_option("formula", ffile, "Formula file")->required();
  eval_cmd->add_option("--bind", binds, "Bind a free variable: x=elem or #p=number")->take_all();
  eval_cmd->add_option("--engine", engine, "memo, stream or both")
      ->check(CLI::IsMember({"memo", "stream", "both"}));

  std::string kind, file1, file2;
  bool model = false;
  auto* canon_cmd = app.add_subcommand("canon", "Print the canonical edge list");
  canon_cmd->add_option("kind", kind, "tree or interval")->required()->check(CLI::IsMember({"tree", "interval"}));
  canon_cmd->add_option("file", file1, "Structure file, or a parent array for trees")->required();
  canon_cmd->add_flag("--model", model, "Print an interval model instead (v l r per line)");

  auto* iso_cmd = app.add_subcommand("iso", "Decide isomorphism by comparing canons");
  iso_cmd->add_option("kind", kind, "tree or interval")->required()->check(CLI::IsMember({"tree", "interval"}));
  iso_cmd->add_option("first", file1)->required();
  iso_cmd->add_option("second", file2)->required();

  std::string family;
  int n = 0, fan_in = 2;
  uint64_t seed = 0;
  bool parents = false;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated structure to standard output");
  gen_cmd->add_option("family", family, "layered, tree, interval or circuit")
      ->required()
      ->check(CLI::IsMember({"layered", "tree", "interval", "circuit"}));
  gen_cmd->add_option("n", n, "Size parameter")->required();
  gen_cmd->add_option("--seed", seed, "Random seed");
  gen_cmd->add_flag("--parents", parents, "Trees: print a parent array");
  gen_cmd->add_option("--fan-in", fan_in, "Circuits: fan-in bound");

  bool circuit = false;
  auto* check_cmd = app.add_subcommand("check", "Parse and validate a structure or formula file");
  check_cmd->add_option("file", file1)->required();
  check_cmd->add_flag("--circuit", circuit, "Also check the circuit path property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(sfile, ffile, binds, engine);
    if (canon_cmd->parsed()) return cmd_canon(kind, file1, model);
    if (iso_cmd->parsed()) return cmd_iso(kind, file1, file2);
    if (gen_cmd->parsed()) return cmd_gen(family, n, seed, parents, fan_in);
    if (check_cmd->parsed()) return cmd_check(file1, circuit);
  } catch (const WrongClass& e) {
    std::cerr << "lrec: " << e.what() << "\n";
    return kWrongClass;
  } catch (const std::exception& e) {
    std::cerr << "lrec: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

#pragma once

#include <optional>

#include "xprod/nuclearity.hpp"

namespace xprod {

/// Parsed run configuration. Descriptors stay close to the JSON shape;
/// building the concrete objects happens in the runner.
struct RunConfig {
  struct GroupSpec {
    std::string kind;  // cyclic | dihedral | symmetric | table
    int n = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<int>> table;
  };
  struct AlgebraSpec {
    std::string kind;  // diagonal | full_matrix | span
    int dim = 0;
    std::vector<Matrix> generators;
  };
  struct ActionSpec {
    std::string kind;  // trivial | permutation | translation | unitary
    std::map<std::string, std::vector<int>> permutations;
    std::map<std::string, Matrix> unitaries;
  };
  struct StateSpec {
    std::string kind;  // trace | vector
    std::vector<Cplx> values;
  };
  struct FieldSpec {
    std::string kind;  // constant | truncated | explicit
    std::vector<std::string> support;
    std::map<std::string, double> scalar_values;
  };
  struct WindowSpec {
    std::string kind;  // support-singletons | group-singletons | tuples
    std::vector<std::vector<std::string>> tuples;
  };
  struct TestSetSpec {
    std::string kind = "basis";  // basis | random
    int count = 8;
  };

  GroupSpec group;
  AlgebraSpec algebra;
  ActionSpec action;
  std::optional<StateSpec> state;
  std::optional<FieldSpec> field;
  std::optional<WindowSpec> window;
  std::vector<std::string> tasks;
  std::uint64_t seed = 0;
  double epsilon = 1e-9;
  int trials = 500;
  TestSetSpec test_set;
  Tolerances tolerances;
  std::string certificates_dir;
  bool parallel = false;
};

/// Parses and cross-validates a JSON document; throws ConfigError with a
/// JSON-pointer path on any violation.
RunConfig parse_config(const std::string& text);

/// Concrete objects built from a config.
struct BuiltSystem {
  SystemPtr sys;
  std::optional<State> state;
  std::optional<AmenabilityField> field;
  Window window;  // configured window (defaults to singletons)
};

BuiltSystem build_system(const RunConfig& config);

}  // namespace xprod

#pragma once

#include <map>

#include "xprod/cpmaps.hpp"

namespace xprod {

/// A node of an admissibility derivation tree. Leaves name bound maps or
/// families; inner nodes apply one closure rule of the admissible-map
/// calculus. Serializable to/from a tagged JSON tree.
///
/// Kinds:
///   leaves:  module_map, functional_times_positive, g_family, g_cofamily
///   map nodes: conjugate_domain, conjugate_codomain, sum, positive_multiple,
///              compose
///   family nodes: family_extend_conjugate, family_extend_sum,
///              family_extend_translate, family_extend_coaction,
///              family_compose, union
struct CertificateNode {
  std::string kind;
  std::string map;         // module_map
  std::string family;      // g_family / g_cofamily
  std::string functional;  // functional_times_positive / family_extend_coaction
  std::string element;     // conjugators and positive elements
  std::string domain;      // space name for functional_times_positive
  std::string index;       // family extensions: which member
  std::string translate;   // group element label for translations
  std::string side;        // "domain" | "codomain"
  double factor = 1.0;     // positive_multiple
  std::vector<CertificateNode> children;
};

struct NamedFunctional {
  AlgebraPtr algebra;
  RowVector values;  // on the algebra basis
};

/// Concrete objects a certificate's names resolve against.
struct CertificateBindings {
  SystemPtr sys;
  std::map<std::string, LinearMap> maps;
  std::map<std::string, WindowFamily> families;
  std::map<std::string, Matrix> elements;
  std::map<std::string, NamedFunctional> functionals;
};

struct CertificateOutcome {
  bool valid = false;
  std::vector<CheckResult> details;
};

/// Walks the tree bottom-up: leaves run their semantic checks (complete
/// positivity, module/family identities, positivity of functional and
/// element), inner nodes check their rule's preconditions and the built
/// object. A node never validates when a child fails. Unresolved names throw
/// IncompleteCertificate.
CertificateOutcome validate_certificate(const CertificateNode& root,
                                        const CertificateBindings& bindings,
                                        const Tolerances& tol = {});

/// JSON round trip for fixture files; layout is the tagged tree described on
/// CertificateNode.
CertificateNode certificate_from_json_text(const std::string& text);
std::string certificate_to_json_text(const CertificateNode& node);

}  // namespace xprod

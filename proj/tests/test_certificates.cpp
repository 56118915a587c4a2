#include <doctest.h>

#include "xprod/nuclearity.hpp"

using namespace xprod;

namespace {

struct Fixture {
  SystemPtr sys;
  FactorizationWitness witness;
  State state;
  CertificateBindings bindings;

  static Fixture make() {
    auto g = FiniteGroup::cyclic(2);
    auto a = StarAlgebra::diagonal(2);
    auto action = GroupAction::coordinate_permutation(g, a, {{1, {1, 0}}});
    SystemPtr sys = CrossedSystem::build(a, g, std::move(action));
    FactorizationWitness w = build_witness(AmenabilityField::constant(sys));
    State rho = State::normalized_trace(a);
    CertificateBindings b = certificate_bindings(w, &rho);
    return Fixture{sys, std::move(w), std::move(rho), std::move(b)};
  }
};

CertificateNode leaf(const std::string& kind, const std::string& ref) {
  CertificateNode node;
  node.kind = kind;
  if (kind == "module_map") node.map = ref;
  else node.family = ref;
  return node;
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("the expectation is a valid module-map leaf") {
  Fixture f = Fixture::make();
  CHECK(validate_certificate(leaf("module_map", "expectation"), f.bindings).valid);
}

TEST_CASE("the transpose fails the module-map leaf (not c.p.)") {
  Fixture f = Fixture::make();
  CertificateOutcome out =
      validate_certificate(leaf("module_map", "transpose"), f.bindings);
  CHECK_FALSE(out.valid);
  bool saw_negative_choi = false;
  for (const auto& d : out.details)
    if (d.kind == CheckResult::Kind::MinEigenvalue && d.witness < -0.5)
      saw_negative_choi = true;
  CHECK(saw_negative_choi);
}

TEST_CASE("a state times a positive element is admissible") {
  Fixture f = Fixture::make();
  CertificateNode node;
  node.kind = "functional_times_positive";
  node.functional = "state-crossed";
  node.element = "unit-base";
  CHECK(validate_certificate(node, f.bindings).valid);
  node.element = "nonpositive-base";
  CHECK_FALSE(validate_certificate(node, f.bindings).valid);
}

TEST_CASE("conjugations preserve admissibility") {
  Fixture f = Fixture::make();
  CertificateNode node;
  node.kind = "conjugate_domain";
  node.element = "crossed-basis:1";
  node.children = {leaf("module_map", "expectation")};
  CHECK(validate_certificate(node, f.bindings).valid);
  node.kind = "conjugate_codomain";
  node.element = "unit-base";
  CHECK(validate_certificate(node, f.bindings).valid);
}

TEST_CASE("sums, positive multiples and compositions validate") {
  Fixture f = Fixture::make();
  CertificateNode sum;
  sum.kind = "sum";
  sum.children = {leaf("module_map", "expectation"),
                  leaf("module_map", "expectation")};
  CHECK(validate_certificate(sum, f.bindings).valid);

  CertificateNode mult;
  mult.kind = "positive_multiple";
  mult.factor = 2.5;
  mult.children = {leaf("module_map", "expectation")};
  CHECK(validate_certificate(mult, f.bindings).valid);
  mult.factor = -1.0;
  CHECK_FALSE(validate_certificate(mult, f.bindings).valid);

  CertificateNode comp;
  comp.kind = "compose";
  comp.children = {leaf("module_map", "expectation"),
                   leaf("module_map", "expectation-into-crossed")};
  CHECK(validate_certificate(comp, f.bindings).valid);
}

TEST_CASE("a sum or composition never validates over a failing child") {
  Fixture f = Fixture::make();
  CertificateNode sum;
  sum.kind = "sum";
  sum.children = {leaf("module_map", "expectation"),
                  leaf("module_map", "transpose")};
  CHECK_FALSE(validate_certificate(sum, f.bindings).valid);

  CertificateNode comp;
  comp.kind = "compose";
  comp.children = {leaf("module_map", "transpose"),
                   leaf("module_map", "identity")};
  CHECK_FALSE(validate_certificate(comp, f.bindings).valid);
}

TEST_CASE("the averaging maps form a G-family and a G-cofamily") {
  Fixture f = Fixture::make();
  CHECK(validate_certificate(leaf("g_family", "averaging-family"), f.bindings).valid);
  CHECK(validate_certificate(leaf("g_cofamily", "averaging-cofamily"),
                             f.bindings).valid);
  CHECK(validate_certificate(leaf("g_family", "compression-family"),
                             f.bindings).valid);
}

TEST_CASE("family extensions validate") {
  Fixture f = Fixture::make();
  CertificateNode base = leaf("g_family", "averaging-family");

  CertificateNode conj;
  conj.kind = "family_extend_conjugate";
  conj.side = "codomain";
  conj.element = "unit";
  conj.index = "0";
  conj.children = {base};
  CHECK(validate_certificate(conj, f.bindings).valid);

  CertificateNode sum;
  sum.kind = "family_extend_sum";
  sum.index = "0,0";
  sum.children = {base};
  CHECK(validate_certificate(sum, f.bindings).valid);

  for (const char* side : {"codomain", "domain"}) {
    CertificateNode tr;
    tr.kind = "family_extend_translate";
    tr.side = side;
    tr.translate = "1";
    tr.index = "0";
    tr.children = {base};
    CHECK(validate_certificate(tr, f.bindings).valid);
  }
}

TEST_CASE("coaction extensions accept arbitrary functionals on C*_r(G)") {
  Fixture f = Fixture::make();
  CertificateNode base = leaf("g_cofamily", "averaging-cofamily");
  for (const char* side : {"codomain", "domain"}) {
    CertificateNode node;
    node.kind = "family_extend_coaction";
    node.side = side;
    node.functional = "group-functional:3";
    node.index = "0";
    node.children = {base};
    CHECK(validate_certificate(node, f.bindings).valid);
  }
}

TEST_CASE("family composition and unions validate") {
  Fixture f = Fixture::make();
  CertificateNode comp;
  comp.kind = "family_compose";
  comp.children = {leaf("g_family", "averaging-family"),
                   leaf("g_family", "compression-family")};
  CHECK(validate_certificate(comp, f.bindings).valid);

  CertificateNode un;
  un.kind = "union";
  un.children = {leaf("g_family", "averaging-family"), comp};
  CHECK(validate_certificate(un, f.bindings).valid);
}

TEST_CASE("unbound names raise IncompleteCertificate") {
  Fixture f = Fixture::make();
  CHECK_THROWS_AS(validate_certificate(leaf("module_map", "nonsense"), f.bindings),
                  IncompleteCertificate);
}

TEST_CASE("unknown node kinds are invalid input") {
  Fixture f = Fixture::make();
  CertificateNode node;
  node.kind = "mystery";
  CHECK_THROWS_AS(validate_certificate(node, f.bindings), InvalidInput);
}

TEST_CASE("JSON round trip preserves the tree") {
  CertificateNode node;
  node.kind = "positive_multiple";
  node.factor = 0.5;
  CertificateNode child;
  child.kind = "conjugate_domain";
  child.element = "crossed-basis:2";
  child.children = {leaf("module_map", "expectation")};
  node.children = {child};

  CertificateNode back = certificate_from_json_text(certificate_to_json_text(node));
  CHECK(back.kind == node.kind);
  CHECK(back.factor == node.factor);
  REQUIRE(back.children.size() == 1);
  CHECK(back.children[0].element == "crossed-basis:2");
  REQUIRE(back.children[0].children.size() == 1);
  CHECK(back.children[0].children[0].map == "expectation");
}

}  // TEST_SUITE

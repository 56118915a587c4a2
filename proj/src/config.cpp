#include "xprod/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

namespace xprod {

namespace {

using Json = nlohmann::json;

const std::set<std::string> kKnownTasks = {
    "structure",        "compatibility",     "expectation",
    "nuclearity-module", "nuclearity-comodule", "normalization",
    "defect-sweep",     "pd-function",       "trace-property",
    "lambda-calculus",  "certificates"};

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ConfigError(pointer, what);
}

const Json& need(const Json& j, const char* key, const std::string& pointer) {
  if (!j.is_object() || !j.contains(key)) fail(pointer + "/" + key, "missing");
  return j.at(key);
}

std::string need_string(const Json& j, const char* key, const std::string& ptr) {
  const Json& v = need(j, key, ptr);
  if (!v.is_string()) fail(ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

int need_int(const Json& j, const char* key, const std::string& ptr) {
  const Json& v = need(j, key, ptr);
  if (!v.is_number_integer()) fail(ptr + "/" + key, "expected an integer");
  return v.get<int>();
}

Cplx parse_complex(const Json& v, const std::string& ptr) {
  if (v.is_number()) return Cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Cplx(v[0].get<double>(), v[1].get<double>());
  fail(ptr, "expected a number or [re, im]");
}

Matrix parse_matrix(const Json& v, const std::string& ptr) {
  if (!v.is_array() || v.empty()) fail(ptr, "expected a nonempty matrix");
  const std::size_t rows = v.size();
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = v[i];
    if (!row.is_array() || (i == 0 ? row.empty() : row.size() != std::size_t(m.cols())))
      fail(ptr + "/" + std::to_string(i), "expected a rectangular matrix");
    if (i == 0) m.resize(rows, row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
      m(i, j) = parse_complex(row[j], ptr + "/" + std::to_string(i) + "/" +
                                          std::to_string(j));
  }
  return m;
}

RunConfig::GroupSpec parse_group(const Json& j) {
  RunConfig::GroupSpec g;
  g.kind = need_string(j, "kind", "/group");
  if (g.kind == "cyclic" || g.kind == "dihedral" || g.kind == "symmetric") {
    g.n = need_int(j, "n", "/group");
    if (g.n <= 0) fail("/group/n", "must be positive");
    if (g.kind == "symmetric" && g.n > 4) fail("/group/n", "symmetric groups need n <= 4");
  } else if (g.kind == "table") {
    const Json& labels = need(j, "labels", "/group");
    if (!labels.is_array() || labels.empty()) fail("/group/labels", "expected labels");
    for (const auto& l : labels) g.labels.push_back(l.get<std::string>());
    const Json& table = need(j, "table", "/group");
    if (!table.is_array()) fail("/group/table", "expected a table");
    for (const auto& row : table) {
      std::vector<int> r;
      for (const auto& v : row) {
        if (v.is_number_integer()) r.push_back(v.get<int>());
        else if (v.is_string()) {
          auto it = std::find(g.labels.begin(), g.labels.end(), v.get<std::string>());
          if (it == g.labels.end()) fail("/group/table", "unknown label in table");
          r.push_back(static_cast<int>(it - g.labels.begin()));
        } else fail("/group/table", "entries must be indices or labels");
      }
      g.table.push_back(std::move(r));
    }
  } else {
    fail("/group/kind", "unknown kind '" + g.kind + "'");
  }
  return g;
}

RunConfig::AlgebraSpec parse_algebra(const Json& j) {
  RunConfig::AlgebraSpec a;
  a.kind = need_string(j, "kind", "/algebra");
  if (a.kind == "diagonal" || a.kind == "full_matrix") {
    a.dim = need_int(j, "dim", "/algebra");
    if (a.dim <= 0) fail("/algebra/dim", "must be positive");
  } else if (a.kind == "span") {
    const Json& gens = need(j, "generators", "/algebra");
    if (!gens.is_array() || gens.empty()) fail("/algebra/generators", "expected matrices");
    for (std::size_t i = 0; i < gens.size(); ++i)
      a.generators.push_back(
          parse_matrix(gens[i], "/algebra/generators/" + std::to_string(i)));
  } else {
    fail("/algebra/kind", "unknown kind '" + a.kind + "'");
  }
  return a;
}

RunConfig::ActionSpec parse_action(const Json& j, const RunConfig::AlgebraSpec& a) {
  RunConfig::ActionSpec act;
  act.kind = need_string(j, "kind", "/action");
  if (act.kind == "trivial" || act.kind == "translation") return act;
  if (act.kind == "permutation") {
    const Json& maps = need(j, "maps", "/action");
    if (!maps.is_object() || maps.empty()) fail("/action/maps", "expected generators");
    for (const auto& [label, perm] : maps.items()) {
      if (!perm.is_array()) fail("/action/maps", "permutation must be an array");
      std::vector<int> p;
      for (const auto& v : perm) p.push_back(v.get<int>());
      if (a.kind == "diagonal" && static_cast<int>(p.size()) != a.dim)
        fail("/action/maps", "permutation has wrong length");
      act.permutations[label] = std::move(p);
    }
    return act;
  }
  if (act.kind == "unitary") {
    const Json& maps = need(j, "maps", "/action");
    if (!maps.is_object() || maps.empty()) fail("/action/maps", "expected generators");
    for (const auto& [label, mat] : maps.items())
      act.unitaries[label] = parse_matrix(mat, "/action/maps/" + label);
    return act;
  }
  fail("/action/kind", "unknown kind '" + act.kind + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail("", "top level must be an object");

  RunConfig config;
  config.group = parse_group(need(j, "group", ""));
  config.algebra = parse_algebra(need(j, "algebra", ""));
  config.action = parse_action(need(j, "action", ""), config.algebra);

  if (j.contains("state")) {
    RunConfig::StateSpec s;
    s.kind = need_string(j.at("state"), "kind", "/state");
    if (s.kind == "vector") {
      const Json& vals = need(j.at("state"), "values", "/state");
      if (!vals.is_array()) fail("/state/values", "expected an array");
      for (std::size_t i = 0; i < vals.size(); ++i)
        s.values.push_back(
            parse_complex(vals[i], "/state/values/" + std::to_string(i)));
    } else if (s.kind != "trace") {
      fail("/state/kind", "unknown kind '" + s.kind + "'");
    }
    config.state = std::move(s);
  }

  if (j.contains("field")) {
    RunConfig::FieldSpec f;
    f.kind = need_string(j.at("field"), "kind", "/field");
    if (f.kind == "truncated") {
      const Json& sup = need(j.at("field"), "support", "/field");
      if (!sup.is_array() || sup.empty()) fail("/field/support", "expected labels");
      for (const auto& v : sup) f.support.push_back(v.get<std::string>());
    } else if (f.kind == "explicit") {
      const Json& vals = need(j.at("field"), "values", "/field");
      if (!vals.is_object() || vals.empty()) fail("/field/values", "expected a map");
      for (const auto& [label, v] : vals.items()) {
        if (!v.is_number()) fail("/field/values/" + label, "expected a scalar");
        f.scalar_values[label] = v.get<double>();
      }
    } else if (f.kind != "constant") {
      fail("/field/kind", "unknown kind '" + f.kind + "'");
    }
    config.field = std::move(f);
  }

  if (j.contains("window")) {
    RunConfig::WindowSpec w;
    w.kind = need_string(j.at("window"), "kind", "/window");
    if (w.kind == "tuples") {
      const Json& tup = need(j.at("window"), "tuples", "/window");
      if (!tup.is_array() || tup.empty()) fail("/window/tuples", "expected tuples");
      for (const auto& t : tup) {
        std::vector<std::string> parts;
        for (const auto& p : t) parts.push_back(p.get<std::string>());
        if (parts.empty()) fail("/window/tuples", "tuples must be nonempty");
        w.tuples.push_back(std::move(parts));
      }
    } else if (w.kind != "support-singletons" && w.kind != "group-singletons") {
      fail("/window/kind", "unknown kind '" + w.kind + "'");
    }
    config.window = std::move(w);
  }

  const Json& tasks = need(j, "tasks", "");
  if (!tasks.is_array() || tasks.empty()) fail("/tasks", "must be a nonempty array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::string t = tasks[i].get<std::string>();
    if (!kKnownTasks.count(t))
      fail("/tasks/" + std::to_string(i), "unknown task '" + t + "'");
    config.tasks.push_back(std::move(t));
  }

  if (!j.contains("seed")) fail("/seed", "missing (required for reproducibility)");
  if (!j.at("seed").is_number_integer()) fail("/seed", "expected an integer");
  config.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("epsilon")) {
    if (!j.at("epsilon").is_number()) fail("/epsilon", "expected a number");
    config.epsilon = j.at("epsilon").get<double>();
  }
  if (j.contains("trials")) {
    if (!j.at("trials").is_number_integer() || j.at("trials").get<int>() <= 0)
      fail("/trials", "expected a positive integer");
    config.trials = j.at("trials").get<int>();
  }
  if (j.contains("test_set")) {
    const Json& ts = j.at("test_set");
    config.test_set.kind = need_string(ts, "kind", "/test_set");
    if (config.test_set.kind == "random")
      config.test_set.count = need_int(ts, "count", "/test_set");
    else if (config.test_set.kind != "basis")
      fail("/test_set/kind", "unknown kind");
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (t.contains("identity_tol"))
      config.tolerances.identity_tol = t.at("identity_tol").get<double>();
    if (t.contains("psd_tol"))
      config.tolerances.psd_tol = t.at("psd_tol").get<double>();
    try {
      config.tolerances.validate();
    } catch (const std::exception& e) {
      fail("/tolerances", e.what());
    }
  }
  if (j.contains("certificates_dir"))
    config.certificates_dir = j.at("certificates_dir").get<std::string>();

  // Cross-field validation.
  auto has_task = [&](const char* t) {
    return std::find(config.tasks.begin(), config.tasks.end(), t) !=
           config.tasks.end();
  };
  if (has_task("defect-sweep") && config.group.kind != "cyclic")
    fail("/group", "defect-sweep requires a cyclic group");
  if ((has_task("pd-function") || has_task("trace-property")) && !config.state)
    fail("/state", "task requires a state");
  if (has_task("certificates") && config.certificates_dir.empty())
    fail("/certificates_dir", "certificates task requires a fixture directory");
  if (config.window && config.window->kind == "support-singletons" && !config.field)
    fail("/window", "support-singletons window requires a field");
  return config;
}

BuiltSystem build_system(const RunConfig& config) {
  std::shared_ptr<const FiniteGroup> g;
  const auto& gs = config.group;
  if (gs.kind == "cyclic") g = FiniteGroup::cyclic(gs.n);
  else if (gs.kind == "dihedral") g = FiniteGroup::dihedral(gs.n);
  else if (gs.kind == "symmetric") g = FiniteGroup::symmetric(gs.n);
  else g = FiniteGroup::from_table(gs.labels, gs.table);

  AlgebraPtr a;
  const Tolerances& tol = config.tolerances;
  if (config.algebra.kind == "diagonal") a = StarAlgebra::diagonal(config.algebra.dim, tol);
  else if (config.algebra.kind == "full_matrix")
    a = StarAlgebra::full_matrix(config.algebra.dim, tol);
  else a = StarAlgebra::span_closure(config.algebra.generators, tol);

  GroupAction action = [&] {
    const auto& as = config.action;
    if (as.kind == "trivial") return GroupAction::trivial(g, a);
    if (as.kind == "translation") return GroupAction::translation(g, a, tol);
    if (as.kind == "permutation") {
      std::map<int, std::vector<int>> gens;
      for (const auto& [label, perm] : as.permutations)
        gens[g->index_of(label)] = perm;
      return GroupAction::coordinate_permutation(g, a, gens, tol);
    }
    std::map<int, Matrix> gens;
    for (const auto& [label, u] : as.unitaries) gens[g->index_of(label)] = u;
    return GroupAction::unitary_conjugation(g, a, gens, tol);
  }();

  BuiltSystem built;
  built.sys = CrossedSystem::build(a, g, std::move(action), tol);

  if (config.state) {
    if (config.state->kind == "trace")
      built.state = State::normalized_trace(a, tol);
    else {
      if (static_cast<int>(config.state->values.size()) != a->dim())
        throw ConfigError("/state/values", "needs one value per basis element");
      RowVector v(a->dim());
      for (int i = 0; i < a->dim(); ++i) v(i) = config.state->values[i];
      built.state = State::from_values(a, std::move(v), tol);
    }
  }

  if (config.field) {
    const auto& fs = *config.field;
    if (fs.kind == "constant")
      built.field = AmenabilityField::constant(built.sys, tol);
    else if (fs.kind == "truncated") {
      std::vector<int> support;
      for (const auto& label : fs.support) support.push_back(g->index_of(label));
      built.field = AmenabilityField::truncated(built.sys, support, tol);
    } else {
      std::vector<AlgebraElement> values(g->order(), a->zero());
      for (const auto& [label, scale] : fs.scalar_values)
        values[g->index_of(label)] = a->unit().scaled(scale);
      built.field = AmenabilityField::from_values(built.sys, std::move(values), tol);
    }
  }

  if (config.window) {
    const auto& ws = *config.window;
    if (ws.kind == "group-singletons")
      built.window = Window::group_singletons(*g);
    else if (ws.kind == "support-singletons")
      built.window = Window::singletons(*g, built.field->support());
    else {
      std::vector<GroupTuple> tuples;
      for (const auto& t : ws.tuples) {
        std::vector<int> parts;
        for (const auto& p : t) parts.push_back(g->index_of(p));
        tuples.push_back(GroupTuple(std::move(parts)));
      }
      built.window = Window(*g, std::move(tuples));
    }
  } else if (built.field) {
    built.window = Window::singletons(*g, built.field->support());
  } else {
    built.window = Window::group_singletons(*g);
  }
  return built;
}

}  // namespace xprod

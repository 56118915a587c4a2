#include "xprod/groups.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace xprod {

FiniteGroup::FiniteGroup(std::vector<std::string> labels,
                         std::vector<std::vector<int>> table)
    : labels_(std::move(labels)), table_(std::move(table)) {
  validate();
}

void FiniteGroup::validate() const {
  const int n = order();
  if (n <= 0) throw InvalidGroup("empty group");
  if (static_cast<int>(table_.size()) != n)
    throw InvalidGroup("table has wrong number of rows");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n)
      throw InvalidGroup("table row has wrong length");
    for (int v : row)
      if (v < 0 || v >= n) throw InvalidGroup("table entry out of range");
  }
  // Latin square: each row and column is a permutation.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> seen_row(n, false), seen_col(n, false);
    for (int j = 0; j < n; ++j) {
      if (seen_row[table_[i][j]]) throw InvalidGroup("row is not a permutation");
      seen_row[table_[i][j]] = true;
      if (seen_col[table_[j][i]]) throw InvalidGroup("column is not a permutation");
      seen_col[table_[j][i]] = true;
    }
  }
  // Identity.
  int id = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) {
      id = e;
      break;
    }
  }
  if (id < 0) throw InvalidGroup("no identity element");
  const_cast<FiniteGroup*>(this)->identity_ = id;
  // Inverses.
  auto& inv = const_cast<FiniteGroup*>(this)->inverse_;
  inv.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (table_[x][y] == id && table_[y][x] == id) {
        inv[x] = y;
        break;
      }
    if (inv[x] < 0) throw InvalidGroup("element without inverse");
  }
  // Full associativity.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw InvalidGroup("multiplication table is not associative");
}

std::shared_ptr<const FiniteGroup> FiniteGroup::cyclic(int n) {
  if (n <= 0) throw InvalidGroup("cyclic group order must be positive");
  std::vector<std::string> labels(n);
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    labels[i] = std::to_string(i);
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return std::shared_ptr<const FiniteGroup>(new FiniteGroup(labels, table));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::dihedral(int n) {
  if (n <= 0) throw InvalidGroup("dihedral parameter must be positive");
  // Elements r^k (index k) and f r^k (index n+k); f r^a f = r^{-a}.
  const int order = 2 * n;
  std::vector<std::string> labels(order);
  for (int k = 0; k < n; ++k) {
    labels[k] = "r" + std::to_string(k);
    labels[n + k] = "f" + std::to_string(k);
  }
  auto idx = [n](bool flip, int k) { return (flip ? n : 0) + ((k % n) + n) % n; };
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      bool fi = i >= n, fj = j >= n;
      int a = i % n, b = j % n;
      if (!fi && !fj) table[i][j] = idx(false, a + b);
      else if (!fi && fj) table[i][j] = idx(true, b - a);
      else if (fi && !fj) table[i][j] = idx(true, a + b);
      else table[i][j] = idx(false, b - a);
    }
  return std::shared_ptr<const FiniteGroup>(new FiniteGroup(labels, table));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 4)
    throw InvalidGroup("symmetric groups supported for 1 <= n <= 4");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const int order = static_cast<int>(perms.size());
  std::vector<std::string> labels(order);
  for (int i = 0; i < order; ++i) {
    std::string s;
    for (int v : perms[i]) s += std::to_string(v);
    labels[i] = s;
  }
  auto find = [&](const std::vector<int>& q) {
    for (int i = 0; i < order; ++i)
      if (perms[i] == q) return i;
    throw InternalError("permutation lookup failed");
  };
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      std::vector<int> comp(n);
      for (int x = 0; x < n; ++x) comp[x] = perms[i][perms[j][x]];
      table[i][j] = find(comp);
    }
  return std::shared_ptr<const FiniteGroup>(new FiniteGroup(labels, table));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::from_table(
    std::vector<std::string> labels, std::vector<std::vector<int>> table) {
  return std::shared_ptr<const FiniteGroup>(
      new FiniteGroup(std::move(labels), std::move(table)));
}

int FiniteGroup::index_of(const std::string& label) const {
  for (int i = 0; i < order(); ++i)
    if (labels_[i] == label) return i;
  throw InvalidElement("unknown group element label '" + label + "'");
}

int tuple_product(const FiniteGroup& g, const GroupTuple& t) {
  int acc = -1;
  for (int part : t.parts) {
    if (part < 0 || part >= g.order())
      throw InvalidElement("tuple component out of range");
    acc = (acc < 0) ? part : g.mul(acc, part);
  }
  return acc;
}

GroupTuple tuple_inverse(const FiniteGroup& g, const GroupTuple& t) {
  std::vector<int> parts(t.parts.rbegin(), t.parts.rend());
  for (int& part : parts) {
    if (part < 0 || part >= g.order())
      throw InvalidElement("tuple component out of range");
    part = g.inv(part);
  }
  return GroupTuple(std::move(parts));
}

GroupTuple left_translate(const FiniteGroup& g, int r, const GroupTuple& t) {
  std::vector<int> parts = t.parts;
  parts[0] = g.mul(r, parts[0]);
  return GroupTuple(std::move(parts));
}

std::string Window::key(const GroupTuple& t) {
  std::ostringstream os;
  for (int p : t.parts) os << p << ',';
  return os.str();
}

Window::Window(const FiniteGroup& g, std::vector<GroupTuple> tuples)
    : tuples_(std::move(tuples)) {
  for (int i = 0; i < size(); ++i) {
    for (int part : tuples_[i].parts)
      if (part < 0 || part >= g.order())
        throw InvalidElement("window tuple component out of range");
    if (!index_.emplace(key(tuples_[i]), i).second)
      throw InvalidInput("window contains duplicate tuples");
  }
}

Window Window::group_singletons(const FiniteGroup& g) {
  std::vector<GroupTuple> t;
  t.reserve(g.order());
  for (int s = 0; s < g.order(); ++s) t.push_back(GroupTuple::singleton(s));
  return Window(g, std::move(t));
}

Window Window::singletons(const FiniteGroup& g, const std::vector<int>& elements) {
  std::vector<GroupTuple> t;
  t.reserve(elements.size());
  for (int s : elements) t.push_back(GroupTuple::singleton(s));
  return Window(g, std::move(t));
}

int Window::find(const GroupTuple& t) const {
  auto it = index_.find(key(t));
  return it == index_.end() ? -1 : it->second;
}

bool Window::closed_under(const FiniteGroup& g, int r) const {
  for (const auto& t : tuples_)
    if (!contains(left_translate(g, r, t))) return false;
  return true;
}

Window Window::translated(const FiniteGroup& g, int r) const {
  std::vector<GroupTuple> t;
  t.reserve(tuples_.size());
  for (const auto& u : tuples_) t.push_back(left_translate(g, r, u));
  return Window(g, std::move(t));
}

Window Window::translation_closure(const FiniteGroup& g) const {
  std::vector<GroupTuple> t = tuples_;
  Window acc(g, t);
  for (int r = 0; r < g.order(); ++r)
    for (const auto& u : tuples_) {
      GroupTuple v = left_translate(g, r, u);
      if (!acc.contains(v)) {
        t.push_back(v);
        acc = Window(g, t);
      }
    }
  return acc;
}

Matrix regular_unitary(const FiniteGroup& g, int s) {
  const int n = g.order();
  Matrix m = Matrix::Zero(n, n);
  for (int u = 0; u < n; ++u) m(g.mul(s, u), u) = 1.0;
  return m;
}

Matrix translation_unitary(const FiniteGroup& g, int r, const Window& w) {
  Matrix m = Matrix::Zero(w.size(), w.size());
  for (int i = 0; i < w.size(); ++i) {
    int j = w.find(left_translate(g, r, w.tuple(i)));
    if (j < 0)
      throw WindowNotClosed("window is not closed under translation by '" +
                            g.label(r) + "'");
    m(j, i) = 1.0;
  }
  return m;
}

}  // namespace xprod
